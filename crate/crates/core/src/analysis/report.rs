//! Orchestrates the metric suite and renders the report.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use super::metrics::{
    algebraic_degree, cycle_structure, differential_uniformity, fixed_points, nonlinearity,
};
use super::sidechannel::{snr_dpa, transparency_order, Snr, TransparencyOrder};
use super::walsh::coordinate_spectra;
use super::{AnalysisError, Progress};
use crate::sbox::SboxTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Nl,
    Du,
    Ad,
    To,
    Snr,
    Fp,
    Cycles,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Nl,
        Metric::Du,
        Metric::Ad,
        Metric::To,
        Metric::Snr,
        Metric::Fp,
        Metric::Cycles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Nl => "nl",
            Metric::Du => "du",
            Metric::Ad => "ad",
            Metric::To => "to",
            Metric::Snr => "snr",
            Metric::Fp => "fp",
            Metric::Cycles => "cycles",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown metric {0:?}; expected nl, du, ad, to, snr, fp, cycles or all")]
pub struct UnknownMetric(pub String);

/// Parses a comma-separated list; `all` expands to every metric.
pub fn parse_metrics(spec: &str) -> Result<BTreeSet<Metric>, UnknownMetric> {
    let mut out = BTreeSet::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Metric::ALL);
        } else {
            out.insert(part.parse()?);
        }
    }
    Ok(out)
}

impl FromStr for Metric {
    type Err = UnknownMetric;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMetric(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub metrics: BTreeSet<Metric>,
    pub workers: usize,
    /// Wall times make reports non-reproducible, so they are opt-in.
    pub record_timings: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            metrics: Metric::ALL.into_iter().collect(),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            record_timings: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricsReport {
    pub name: String,
    pub n: u32,
    pub m: u32,
    pub bijective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nl: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub du: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ad: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "as_decimal")]
    pub to: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "as_decimal")]
    pub snr: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_points: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opposite_fixed_points: Option<u32>,
    /// (cycle length, number of cycles), ascending by length.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_lengths: Option<Vec<(u32, u32)>>,
    /// Seconds per metric.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    /// Metrics that could not be computed for this table.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub errors: BTreeMap<String, String>,
    pub version: String,
    pub provenance: String,
    #[serde(skip)]
    pub to_exact: Option<TransparencyOrder>,
    #[serde(skip)]
    pub snr_exact: Option<Snr>,
}

/// Emits the already-rounded decimal string as a JSON number.
fn as_decimal<S: serde::Serializer>(v: &Option<String>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(text) => serde_json::Number::from_str(text)
            .map_err(serde::ser::Error::custom)?
            .serialize(s),
        None => s.serialize_none(),
    }
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub const CSV_HEADER: &'static str =
        "name,n,m,bijective,nl,du,ad,to,snr,fixed_points,opposite_fixed_points,cycle_lengths";

    /// One flat row matching [`Self::CSV_HEADER`]; cycles render as
    /// `len:count` pairs separated by `;`.
    pub fn to_csv_row(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(ToString::to_string).unwrap_or_default()
        }
        let cycles = self
            .cycle_lengths
            .as_ref()
            .map(|c| {
                c.iter()
                    .map(|(l, n)| format!("{l}:{n}"))
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default();
        let name = if self.name.contains([',', '"']) {
            format!("\"{}\"", self.name.replace('"', "\"\""))
        } else {
            self.name.clone()
        };
        [
            name,
            self.n.to_string(),
            self.m.to_string(),
            self.bijective.to_string(),
            opt(&self.nl),
            opt(&self.du),
            opt(&self.ad),
            opt(&self.to),
            opt(&self.snr),
            opt(&self.fixed_points),
            opt(&self.opposite_fixed_points),
            cycles,
        ]
        .join(",")
    }
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, key: Metric, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    timings.insert(
        key.name().to_string(),
        (t.elapsed().as_secs_f64() * 1e3).round() / 1e3,
    );
    out
}

/// Runs the selected metrics on a dedicated pool of `opts.workers` threads.
pub fn analyze(
    s: &SboxTable,
    opts: &AnalysisOptions,
    progress: Progress<'_>,
) -> Result<MetricsReport, AnalysisError> {
    if opts.workers == 0 {
        return Err(AnalysisError::Workers);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| AnalysisError::Pool(e.to_string()))?;
    Ok(pool.install(|| run(s, opts, progress)))
}

fn run(s: &SboxTable, opts: &AnalysisOptions, progress: Progress<'_>) -> MetricsReport {
    let want = |m| opts.metrics.contains(&m);
    let mut t = BTreeMap::new();
    let mut r = MetricsReport {
        name: s.name().to_string(),
        n: s.n(),
        m: s.m(),
        bijective: s.is_bijective(),
        nl: None,
        du: None,
        ad: None,
        to: None,
        snr: None,
        fixed_points: None,
        opposite_fixed_points: None,
        cycle_lengths: None,
        timings: None,
        errors: BTreeMap::new(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        provenance: s.provenance().to_string(),
        to_exact: None,
        snr_exact: None,
    };
    let note = |msg: &str| {
        if let Some(p) = progress {
            p(msg)
        }
    };
    if want(Metric::Nl) {
        note("nl: start");
        r.nl = Some(timed(&mut t, Metric::Nl, || nonlinearity(s, progress)));
    }
    if want(Metric::Du) {
        note("du: start");
        r.du = Some(timed(&mut t, Metric::Du, || {
            differential_uniformity(s, progress).du
        }));
    }
    if want(Metric::Ad) {
        r.ad = Some(timed(&mut t, Metric::Ad, || algebraic_degree(s)));
    }
    // TO and SNR share the coordinate spectra
    let spectra = (want(Metric::To) || want(Metric::Snr)).then(|| coordinate_spectra(s));
    if let Some(spectra) = &spectra {
        if want(Metric::To) {
            note("to: start");
            match timed(&mut t, Metric::To, || transparency_order(s, spectra)) {
                Ok(to) => {
                    r.to = Some(to.display());
                    r.to_exact = Some(to);
                }
                Err(e) => {
                    r.errors.insert("to".into(), e.to_string());
                }
            }
        }
        if want(Metric::Snr) {
            match timed(&mut t, Metric::Snr, || snr_dpa(s, spectra)) {
                Ok(snr) => {
                    r.snr = Some(snr.display());
                    r.snr_exact = Some(snr);
                }
                Err(e) => {
                    r.errors.insert("snr".into(), e.to_string());
                }
            }
        }
    }
    if want(Metric::Fp) {
        match timed(&mut t, Metric::Fp, || fixed_points(s)) {
            Ok((fp, ofp)) => {
                r.fixed_points = Some(fp);
                r.opposite_fixed_points = Some(ofp);
            }
            Err(e) => {
                r.errors.insert("fp".into(), e.to_string());
            }
        }
    }
    if want(Metric::Cycles) {
        match timed(&mut t, Metric::Cycles, || cycle_structure(s)) {
            Ok(c) => r.cycle_lengths = Some(c),
            Err(e) => {
                r.errors.insert("cycles".into(), e.to_string());
            }
        }
    }
    if opts.record_timings {
        r.timings = Some(t);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_parsing() {
        assert_eq!(parse_metrics("all").unwrap().len(), 7);
        let m = parse_metrics("nl, du").unwrap();
        assert!(m.contains(&Metric::Nl) && m.contains(&Metric::Du) && m.len() == 2);
        assert!(parse_metrics("nl,lat").is_err());
    }

    #[test]
    fn partial_report_and_field_order() {
        let t = SboxTable::new("z", 4, 4, vec![0; 16], "const").unwrap();
        let opts = AnalysisOptions {
            workers: 2,
            ..Default::default()
        };
        let r = analyze(&t, &opts, None).unwrap();
        assert_eq!(r.nl, Some(0));
        assert!(r.cycle_lengths.is_none());
        assert!(r.errors.contains_key("cycles"));
        let json = r.to_json();
        let keys = [
            "\"name\"",
            "\"n\"",
            "\"bijective\"",
            "\"nl\"",
            "\"du\"",
            "\"ad\"",
            "\"to\"",
            "\"snr\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(!json.contains("timings"));
    }

    #[test]
    fn zero_workers_rejected() {
        let t = SboxTable::new("z", 4, 4, (0..16).collect(), "").unwrap();
        let opts = AnalysisOptions {
            workers: 0,
            ..Default::default()
        };
        assert!(matches!(
            analyze(&t, &opts, None),
            Err(AnalysisError::Workers)
        ));
    }

    #[test]
    fn csv_row_shape() {
        let t = SboxTable::new("id", 4, 4, (0..16).collect(), "").unwrap();
        let r = analyze(&t, &AnalysisOptions::default(), None).unwrap();
        let row = r.to_csv_row();
        assert_eq!(
            row.split(',').count(),
            MetricsReport::CSV_HEADER.split(',').count()
        );
        assert!(row.starts_with("id,4,4,true,0,16,1,"), "{row}");
        assert!(row.ends_with(",16,0,1:16"), "{row}");
    }
}
