//! JSON and CSV file formats. Rationals are always written as `"n/d"` (or
//! `"n"` for integers).

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use densitylab_core::density::DensityProfile;
use densitylab_core::exact::{format_rational, int, parse_rational, to_decimal};
use densitylab_core::{Configuration, Finding, Interval, IntervalSet, PeriodicSet, Rational, VerificationReport};
use serde::{Deserialize, Serialize};

/// `{"halfline": bool, "intervals": [["a", "b"], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFile {
    pub halfline: bool,
    pub intervals: Vec<[String; 2]>,
}

/// A parsed set file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetDescription {
    /// `(−∞, 0) ∪ body`.
    Configuration(Configuration),
    /// A finite union of open intervals.
    Finite(IntervalSet),
}

fn parse_pairs(pairs: &[[String; 2]]) -> Result<Vec<Interval>> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, [a, b])| {
            let l = parse_rational(a).with_context(|| format!("interval {i}: left endpoint {a:?}"))?;
            let r = parse_rational(b).with_context(|| format!("interval {i}: right endpoint {b:?}"))?;
            Interval::new(l, r).with_context(|| format!("interval {i}"))
        })
        .collect()
}

fn render_pairs(set: &IntervalSet) -> Vec<[String; 2]> {
    set.intervals().iter().map(|iv| [format_rational(iv.left()), format_rational(iv.right())]).collect()
}

impl SetFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed set file")
    }

    /// Intervals must be listed in increasing order and pairwise separated.
    pub fn describe(&self) -> Result<SetDescription> {
        let body = IntervalSet::from_ordered(parse_pairs(&self.intervals)?).context("intervals must be sorted and disjoint")?;
        Ok(if self.halfline {
            SetDescription::Configuration(Configuration::new(body).context("not a valid configuration")?)
        } else {
            SetDescription::Finite(body)
        })
    }

    pub fn configuration(&self) -> Result<Configuration> {
        match self.describe()? {
            SetDescription::Configuration(c) => Ok(c),
            SetDescription::Finite(_) => bail!("expected a configuration (\"halfline\": true)"),
        }
    }

    pub fn finite(&self) -> Result<IntervalSet> {
        match self.describe()? {
            SetDescription::Finite(s) => Ok(s),
            SetDescription::Configuration(_) => bail!("expected a finite set (\"halfline\": false)"),
        }
    }

    pub fn from_configuration(c: &Configuration) -> Self {
        Self { halfline: true, intervals: render_pairs(c.body()) }
    }

    pub fn from_set(s: &IntervalSet) -> Self {
        Self { halfline: false, intervals: render_pairs(s) }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

/// `{"generator": [["0", "nu1"], …, ["mu_r", "1"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoodSetFile {
    pub generator: Vec<[String; 2]>,
}

impl GoodSetFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed good-set file")
    }

    pub fn periodic(&self) -> Result<PeriodicSet> {
        let g = IntervalSet::from_ordered(parse_pairs(&self.generator)?).context("generator intervals must be sorted and disjoint")?;
        Ok(PeriodicSet::from_generator(&g)?)
    }

    pub fn from_periodic(h: &PeriodicSet) -> Self {
        Self { generator: render_pairs(h.generator()) }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FindingJson {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    pub side: &'static str,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
}

impl From<&Finding> for FindingJson {
    fn from(f: &Finding) -> Self {
        Self {
            label: f.label.clone(),
            endpoint: f.point.as_ref().map(format_rational),
            omega: f.radius.as_ref().map(format_rational),
            side: f.status.as_str(),
            values: f.values.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub subject: String,
    pub passed: bool,
    pub outcome: &'static str,
    pub findings: Vec<FindingJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        Self {
            subject: r.subject.clone(),
            passed: r.passed(),
            outcome: r.outcome().as_str(),
            findings: r.findings.iter().map(FindingJson::from).collect(),
            notes: r.notes.clone(),
        }
    }
}

/// `n/d` with a decimal rendering alongside.
pub fn exact_and_decimal(x: &Rational, digits: usize) -> String {
    format!("{} ({})", format_rational(x), to_decimal(x, digits))
}

/// Profile rows: every breakpoint and every piece midpoint, plus one point
/// past the last breakpoint when the tail is exact.
pub fn profile_rows(profile: &DensityProfile) -> Vec<(Rational, Rational)> {
    let mut radii = Vec::new();
    let mut prev = Rational::from_integer(0.into());
    for b in profile.breakpoints() {
        radii.push((&prev + b) / int(2));
        radii.push(b.clone());
        prev = b.clone();
    }
    let extra = if profile.breakpoints().is_empty() { int(1) } else { int(2) * &prev };
    if profile.density(&extra).is_some() {
        radii.push((&prev + &extra) / int(2));
        radii.push(extra);
    }
    radii.into_iter().filter_map(|w| profile.density(&w).map(|d| (w, d))).collect()
}

/// CSV with columns `omega,density` (decimals) and their exact values.
pub fn profile_csv(profile: &DensityProfile, digits: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["omega", "density", "omega_exact", "density_exact"])?;
    for (omega, d) in profile_rows(profile) {
        w.write_record([to_decimal(&omega, digits), to_decimal(&d, digits), format_rational(&omega), format_rational(&d)])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use densitylab_core::exact::rat;

    #[test]
    fn set_file_round_trip() {
        let text = r#"{"halfline": true, "intervals": [["1/2", "3/4"], ["1", "2"]]}"#;
        let f = SetFile::parse(text).unwrap();
        let c = f.configuration().unwrap();
        assert_eq!(c.body().total_measure(), rat(5, 4));
        let again = SetFile::from_configuration(&c);
        assert_eq!(again, f);
        assert_eq!(SetFile::parse(&again.to_json()).unwrap().to_json(), again.to_json());
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            r#"{"halfline": true, "intervals": [["3/0", "1"]]}"#,
            r#"{"halfline": true, "intervals": [["1", "2"], ["1/2", "3/4"]]}"#,
            r#"{"halfline": true, "intervals": [["-1", "2"]]}"#,
            r#"{"halfline": true, "intervals": [["0.5", "2"]]}"#,
            r#"{"intervals": []}"#,
        ] {
            assert!(SetFile::parse(text).and_then(|f| f.describe()).is_err(), "{text}");
        }
    }

    #[test]
    fn good_set_file() {
        let f = GoodSetFile::parse(r#"{"generator": [["0", "1/4"], ["3/4", "1"]]}"#).unwrap();
        let h = f.periodic().unwrap();
        assert_eq!(h.measure(), &rat(1, 2));
        assert_eq!(GoodSetFile::from_periodic(&h), f);
    }
}
