use crate::error::{invalid, Result};
use crate::interferometer::{SettingStats, ShotStats};

/// Undoes a detector efficiency `η`: means divided by `η`, variances by `η²`.
pub fn correct_efficiency(stats: &SettingStats, eta: f64) -> Result<SettingStats> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", eta, "detector efficiency must lie in (0, 1]"));
    }
    Ok(SettingStats {
        mean_minus: stats.mean_minus / eta,
        mean_plus: stats.mean_plus / eta,
        var_minus: stats.var_minus / (eta * eta),
        var_plus: stats.var_plus / (eta * eta),
        ..*stats
    })
}

pub fn correct_efficiency_all(stats: &ShotStats, eta: f64) -> Result<ShotStats> {
    Ok(ShotStats {
        settings: stats
            .settings
            .iter()
            .map(|s| correct_efficiency(s, eta))
            .collect::<Result<_>>()?,
    })
}
