use std::io::Write;

use super::engine::FlowRecord;
use super::kpi::{KpiSeries, ModeSummary};
use crate::radio::RadioMode;
use crate::units::fmt_sig9;
use crate::Result;

fn opt(v: Option<f64>) -> String {
    v.map(fmt_sig9).unwrap_or_default()
}

/// One row per window; windows without completions leave the throughput
/// and transfer-time columns empty.
pub fn write_kpis_csv<W: Write>(series: &KpiSeries, mut out: W) -> Result<()> {
    write!(out, "time_s,mut_bps,cet_bps,max_load,mean_ftt_s")?;
    for k in 0..series.pairs {
        write!(out, ",delta_{k}")?;
    }
    writeln!(out)?;
    for p in &series.points {
        write!(
            out,
            "{},{},{},{},{}",
            fmt_sig9(p.time_s),
            opt(p.mut_bps),
            opt(p.cet_bps),
            fmt_sig9(p.max_load),
            opt(p.mean_ftt_s)
        )?;
        for k in 0..series.pairs {
            write!(out, ",{}", opt(p.delta.get(k).copied().flatten()))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_flows_csv<W: Write>(flows: &[FlowRecord], mut out: W) -> Result<()> {
    writeln!(out, "id,layer,cell,arrival_s,ftt_s,volume_bits")?;
    for f in flows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            f.id,
            f.layer.as_str(),
            f.cell,
            fmt_sig9(f.arrival_s),
            fmt_sig9(f.ftt_s),
            fmt_sig9(f.volume_bits)
        )?;
    }
    Ok(())
}

pub fn write_events<W: Write>(lines: &[String], mut out: W) -> Result<()> {
    for l in lines {
        writeln!(out, "{l}")?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[(RadioMode, ModeSummary)], mut out: W) -> Result<()> {
    writeln!(out, "mode,mean_mut_bps,mean_cet_bps,mean_ftt_s,peak_load")?;
    for (mode, s) in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            mode,
            fmt_sig9(s.mean_mut_bps),
            fmt_sig9(s.mean_cet_bps),
            fmt_sig9(s.mean_ftt_s),
            fmt_sig9(s.peak_load)
        )?;
    }
    Ok(())
}
