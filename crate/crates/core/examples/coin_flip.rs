//! Ten thousand fair coins flipped ten thousand times each: the best coin
//! looks like a 51.9% coin.

use sota_bias::exact::{CohortSpec, TrialModel, max_distribution, summarize};

fn main() -> sota_bias::Result<()> {
    let model = TrialModel::new(10_000, 0.5)?;
    let dist = max_distribution(&CohortSpec::new(10_000)?, &model);
    let s = summarize(&dist, 0.05)?;
    println!("E(best heads rate) = {:.4}", s.expectation);
    println!("sd                 = {:.5}", s.sd);
    println!("95% interval       = ({:.4}, {:.4})", s.ci_low, s.ci_high);
    Ok(())
}
