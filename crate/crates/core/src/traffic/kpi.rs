use crate::network::CellId;

/// KPIs of one measurement window ending at `time_s`.
///
/// Throughput KPIs are `None` when no flow completed in the window.
#[derive(Debug, Clone, PartialEq)]
pub struct KpiPoint {
    pub time_s: f64,
    /// Mean of per-flow throughputs (volume / transfer time).
    pub mut_bps: Option<f64>,
    /// 5th percentile of per-flow throughputs (nearest rank).
    pub cet_bps: Option<f64>,
    pub mean_ftt_s: Option<f64>,
    /// Largest busy-time fraction over the measured cells.
    pub max_load: f64,
    /// Busy-time fraction per measured cell.
    pub loads: Vec<f64>,
    pub completed: usize,
    /// Virtual-sector bandwidth fraction per pair, when the mode splits bandwidth.
    pub delta: Vec<Option<f64>>,
}

/// `p`-quantile of ascending `sorted` by the nearest-rank rule.
pub fn nearest_rank(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    Some(sorted[rank - 1])
}

/// KPIs from the `(volume_bits, transfer_time_s)` of flows completed in a
/// window and the busy time of each cell within it.
pub fn measure_kpis(time_s: f64, completions: &[(f64, f64)], busy_s: &[f64], window_s: f64) -> KpiPoint {
    let mut tput: Vec<f64> = completions.iter().map(|(v, t)| v / t).collect();
    tput.sort_by(f64::total_cmp);
    let n = completions.len();
    let mean = |xs: &mut dyn Iterator<Item = f64>| {
        if n == 0 {
            None
        } else {
            Some(xs.sum::<f64>() / n as f64)
        }
    };
    let loads: Vec<f64> = busy_s
        .iter()
        .map(|b| if window_s > 0.0 { (b / window_s).clamp(0.0, 1.0) } else { 0.0 })
        .collect();
    KpiPoint {
        time_s,
        mut_bps: mean(&mut tput.iter().copied()),
        cet_bps: nearest_rank(&tput, 0.05),
        mean_ftt_s: mean(&mut completions.iter().map(|c| c.1)),
        max_load: loads.iter().copied().fold(0.0, f64::max),
        loads,
        completed: n,
        delta: Vec::new(),
    }
}

/// Run-level averages of the windowed KPIs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSummary {
    pub mean_mut_bps: f64,
    pub mean_cet_bps: f64,
    pub mean_ftt_s: f64,
    pub peak_load: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpiSeries {
    pub window_s: f64,
    /// Measured cells, in the order of [`KpiPoint::loads`].
    pub cells: Vec<CellId>,
    pub pairs: usize,
    pub points: Vec<KpiPoint>,
}

fn mean_of(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

impl KpiSeries {
    /// Averages over windows; windows without completions are skipped for
    /// the throughput and transfer-time means.
    pub fn summary(&self) -> ModeSummary {
        ModeSummary {
            mean_mut_bps: mean_of(self.points.iter().filter_map(|p| p.mut_bps)),
            mean_cet_bps: mean_of(self.points.iter().filter_map(|p| p.cet_bps)),
            mean_ftt_s: mean_of(self.points.iter().filter_map(|p| p.mean_ftt_s)),
            peak_load: self.points.iter().map(|p| p.max_load).fold(0.0, f64::max),
        }
    }

    /// Trailing moving average over `span` windows, for plotting.
    pub fn smoothed(&self, span: usize) -> KpiSeries {
        let span = span.max(1);
        let avg = |vals: &[Option<f64>]| {
            let v: Vec<f64> = vals.iter().flatten().copied().collect();
            if v.is_empty() {
                None
            } else {
                Some(v.iter().sum::<f64>() / v.len() as f64)
            }
        };
        let points = (0..self.points.len())
            .map(|k| {
                let w = &self.points[k.saturating_sub(span - 1)..=k];
                let col = |f: fn(&KpiPoint) -> Option<f64>| avg(&w.iter().map(f).collect::<Vec<_>>());
                let mut p = self.points[k].clone();
                p.mut_bps = col(|p| p.mut_bps);
                p.cet_bps = col(|p| p.cet_bps);
                p.mean_ftt_s = col(|p| p.mean_ftt_s);
                p.max_load = w.iter().map(|p| p.max_load).sum::<f64>() / w.len() as f64;
                p
            })
            .collect();
        KpiSeries {
            points,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_flow_window() {
        let p = measure_kpis(10.0, &[(3e6, 0.3)], &[0.3], 10.0);
        assert!((p.mut_bps.unwrap() - 10e6).abs() < 1e-6);
        assert!((p.cet_bps.unwrap() - 10e6).abs() < 1e-6);
        assert!((p.mean_ftt_s.unwrap() - 0.3).abs() < 1e-15);
        assert!((p.max_load - 0.03).abs() < 1e-15);
    }

    #[test]
    fn nearest_rank_fifth_percentile() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(nearest_rank(&v, 0.05), Some(5.0));
        assert_eq!(nearest_rank(&[7.0], 0.05), Some(7.0));
        assert_eq!(nearest_rank(&[], 0.05), None);
    }

    #[test]
    fn idle_window_has_gaps_and_zero_load() {
        let p = measure_kpis(10.0, &[], &[0.0, 0.0], 10.0);
        assert_eq!(p.mut_bps, None);
        assert_eq!(p.cet_bps, None);
        assert_eq!(p.max_load, 0.0);
        assert_eq!(p.loads, vec![0.0, 0.0]);
    }

    #[test]
    fn cet_never_exceeds_mut() {
        let c: Vec<(f64, f64)> = (1..40).map(|k| (1e6 * k as f64, 0.1 + 0.07 * (k % 5) as f64)).collect();
        let p = measure_kpis(1.0, &c, &[], 1.0);
        assert!(p.cet_bps.unwrap() <= p.mut_bps.unwrap());
    }
}
