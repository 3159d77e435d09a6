//! Bias of the sample maximum as each parameter varies with the others held
//! at m = 5000, n = 10000, theta = 0.9.

use sota_bias::exact::{SweepBase, SweepGrid, bias_sweep};

fn main() -> sota_bias::Result<()> {
    let base = SweepBase {
        m: 5000,
        n: 10_000,
        theta: 0.9,
    };
    let grids = [
        SweepGrid::Classifiers(vec![1, 10, 100, 1000, 5000, 20_000]),
        SweepGrid::TestSize(vec![100, 1000, 5000, 10_000, 50_000, 100_000]),
        SweepGrid::Theta(vec![0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99]),
    ];
    for grid in &grids {
        println!("{:>8} {:>10} {:>10}", grid.name(), "E(max)", "bias");
        for row in bias_sweep(grid, base)? {
            println!(
                "{:>8} {:>10.5} {:>10.5}",
                row.value, row.expectation, row.bias
            );
        }
        println!();
    }
    Ok(())
}
