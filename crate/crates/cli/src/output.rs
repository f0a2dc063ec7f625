//! CSV and JSON-lines rendering. Floats use 17 significant digits so the text
//! round-trips; inapplicable fields are empty (CSV) or null (JSON).

use semigroup_lab::bounds::BoundParams;
use semigroup_lab::experiments::ExperimentRecord;
use serde::Serialize;

use crate::config::Format;

pub const CSV_HEADER: &str =
    "experiment,seed,dim,projection_kind,t,re_z,im_z,k,error,bound,ratio,delta,big_r,wall_time_s";

fn real(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

#[derive(Serialize)]
struct Row<'a> {
    experiment: &'a str,
    seed: u64,
    dim: usize,
    projection_kind: &'a str,
    t: Option<f64>,
    re_z: Option<f64>,
    im_z: Option<f64>,
    k: Option<u64>,
    error: Option<f64>,
    bound: Option<f64>,
    ratio: Option<f64>,
    delta: Option<f64>,
    big_r: Option<f64>,
    wall_time_s: Option<f64>,
}

impl<'a> Row<'a> {
    fn new(r: &'a ExperimentRecord, timing: bool) -> Self {
        Row {
            experiment: r.experiment,
            seed: r.seed,
            dim: r.dim,
            projection_kind: &r.projection_kind,
            t: r.t,
            re_z: r.z.map(|z| z.re),
            im_z: r.z.map(|z| z.im),
            k: r.k,
            error: r.error,
            bound: r.bound,
            ratio: r.ratio,
            delta: r.delta,
            big_r: r.big_r,
            wall_time_s: timing.then_some(r.wall_time),
        }
    }

    fn csv(&self) -> String {
        [
            self.experiment.to_string(),
            self.seed.to_string(),
            self.dim.to_string(),
            self.projection_kind.to_string(),
            real(self.t),
            real(self.re_z),
            real(self.im_z),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            real(self.error),
            real(self.bound),
            real(self.ratio),
            real(self.delta),
            real(self.big_r),
            real(self.wall_time_s),
        ]
        .join(",")
    }
}

/// Renders records; `timing` fills `wall_time_s`, which is otherwise left
/// empty so that reruns produce identical bytes.
pub fn render_records(records: &[ExperimentRecord], format: Format, timing: bool) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in records {
                out.push_str(&Row::new(r, timing).csv());
                out.push('\n');
            }
        }
        Format::JsonLines => {
            for r in records {
                out.push_str(&serde_json::to_string(&Row::new(r, timing)).expect("plain data"));
                out.push('\n');
            }
        }
    }
    out
}

/// `name,value` rows for CSV, one JSON object otherwise.
pub fn render_bound_params(bp: &BoundParams, format: Format) -> String {
    match format {
        Format::Csv => {
            let rows = [
                ("delta", bp.delta),
                ("r", bp.r),
                ("big_r", bp.big_r),
                ("t1", bp.t1),
                ("t2", bp.t2),
                ("c1", bp.c1),
                ("c2", bp.c2),
                ("sup_m", bp.sup_m),
                ("raw_sup_m", bp.raw_sup_m),
                ("m_samples", bp.m_samples as f64),
                ("norm_a", bp.norm_a),
                ("norm_p", bp.norm_p),
                ("norm_p_minus_q", bp.norm_p_minus_q),
                ("spectral_radius_qaq", bp.spectral_radius_qaq),
                ("norm_qaq", bp.norm_qaq),
            ];
            let mut out = String::from("name,value\n");
            for (name, value) in rows {
                out.push_str(&format!("{name},{value:.16e}\n"));
            }
            out
        }
        Format::JsonLines => format!("{}\n", serde_json::to_string(bp).expect("plain data")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use semigroup_lab::experiments::{main_sweep, SweepConfig};
    use semigroup_lab::Complex64;

    #[test]
    fn csv_shape() {
        let cfg = SweepConfig {
            reference: true,
            t_grid: vec![1.0],
            z_list: vec![Complex64::new(-3.0, 0.0), Complex64::new(-50.0, 1.0)],
            ..SweepConfig::default()
        };
        let text = render_records(&main_sweep(&cfg).unwrap(), Format::Csv, false);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first.len(), 14);
        assert_eq!(first[0], "main");
        assert_eq!(first[3], "reference");
        assert_eq!(first[5], "-3.0000000000000000e0");
        // z = −3 lies outside Re z < −2R: no bound, no ratio; k and wall time empty
        assert_eq!((first[7], first[9], first[10], first[13]), ("", "", "", ""));
        let second: Vec<&str> = lines[2].split(',').collect();
        assert!(!second[9].is_empty() && !second[10].is_empty());
        let error: f64 = second[8].parse().unwrap();
        assert!(error > 0.0);
    }

    #[test]
    fn json_lines_shape() {
        let cfg = SweepConfig {
            reference: true,
            t_grid: vec![1.0],
            z_list: vec![Complex64::new(-3.0, 0.0)],
            ..SweepConfig::default()
        };
        let text = render_records(&main_sweep(&cfg).unwrap(), Format::JsonLines, false);
        let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(v["experiment"], "main");
        assert!(v["bound"].is_null());
        assert!(v["wall_time_s"].is_null());
        assert_eq!(v["re_z"], -3.0);
    }
}
