//! Best empirical AUC among many teams with the same true AUC, under the
//! binormal score model, on an imbalanced test set (1.7% positives).

use sota_bias::auc::{AucCohort, ScoreModel, auc_from_model, simulate_max_auc};
use sota_bias::dependent::SimulationConfig;

fn main() -> sota_bias::Result<()> {
    let model = ScoreModel::standard(0.9)?;
    println!(
        "mu+ = {:.4} gives AUC {:.4}",
        model.mu_plus,
        auc_from_model(&model)
    );

    let config = SimulationConfig::new(1000, 3);
    for m in [1, 100, 1000] {
        let s = simulate_max_auc(&AucCohort::identical(0.9, m, 3000, 0.017)?, &config)?.summary;
        println!(
            "m = {m:>4}: E(max AUC) = {:.4}, CI = ({:.4}, {:.4})",
            s.expectation, s.ci_low, s.ci_high
        );
    }
    Ok(())
}
