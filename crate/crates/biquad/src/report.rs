//! Report payloads and their json and text renderings.
//!
//! Scalars and polynomials are rendered in the grammar the parsers accept, so
//! a report can be fed back as input.

use std::fmt::Write as _;

use biquad_core::calculus::{Obstruction, TwistFamily};
use biquad_core::freealg::NormalPoly;
use biquad_core::presentation::{AlgebraPresentation, ClosedPbwReport, PbwReport};
use biquad_core::smoothness::{ConditionReport, SmoothnessVerdict, WitnessRecord};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub name: Option<String>,
    pub n: usize,
    pub orientation: &'static str,
    pub pbw: PbwJson,
    pub verdict: Option<VerdictJson>,
    pub conditions: Vec<ConditionJson>,
    pub checks: ChecksJson,
    pub timings: Timings,
}

#[derive(Debug, Clone, Serialize)]
pub struct PbwJson {
    pub consistent: bool,
    pub failures: Vec<OverlapJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapJson {
    pub triple: [usize; 3],
    pub difference: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub status: &'static str,
    pub obstruction: Option<[usize; 3]>,
    pub witness: Option<Vec<RhoJson>>,
    pub gkdim: usize,
}

/// `rho_k(x_j) = lambda x_j + mu` for every `j`.
#[derive(Debug, Clone, Serialize)]
pub struct RhoJson {
    pub generator: usize,
    pub images: Vec<ImageJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImageJson {
    pub generator: usize,
    pub lambda: String,
    pub mu: String,
    #[serde(skip)]
    pub text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionJson {
    pub id: &'static str,
    pub indices: Vec<usize>,
    pub lhs: String,
    pub holds: bool,
}

/// Depth fields hold the verified degree bound, `null` when the check failed
/// or was not run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ChecksJson {
    pub dd_zero_depth: Option<u32>,
    pub leibniz_depth: Option<u32>,
    pub connectedness_depth: Option<u32>,
    pub integral_identity: Option<bool>,
    pub depth: Option<u32>,
    pub endomorphisms: Option<Vec<bool>>,
    pub commutation: Option<bool>,
    pub partials_depth: Option<u32>,
    pub volume_twist_depth: Option<u32>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

pub fn pbw_json(r: &PbwReport) -> PbwJson {
    PbwJson {
        consistent: r.consistent,
        failures: r
            .failures
            .iter()
            .map(|f| OverlapJson { triple: [f.triple.0, f.triple.1, f.triple.2], difference: f.difference.to_string() })
            .collect(),
    }
}

pub fn witness_json(tw: &TwistFamily) -> Vec<RhoJson> {
    tw.maps()
        .iter()
        .enumerate()
        .map(|(k, r)| RhoJson {
            generator: k + 1,
            images: r
                .images()
                .iter()
                .enumerate()
                .map(|(j, (l, m))| ImageJson {
                    generator: j + 1,
                    lambda: l.to_string(),
                    mu: m.to_string(),
                    text: NormalPoly::affine(tw.n(), j + 1, l, m).to_string(),
                })
                .collect(),
        })
        .collect()
}

fn obstruction_json(o: &Obstruction) -> [usize; 3] {
    [o.i, o.j, o.k]
}

pub fn conditions_json(c: &ConditionReport) -> Vec<ConditionJson> {
    c.entries
        .iter()
        .map(|e| ConditionJson {
            id: e.id,
            indices: [e.i, e.j].into_iter().chain(e.k).collect(),
            lhs: e.lhs.to_string(),
            holds: e.holds,
        })
        .collect()
}

pub fn checks_json(r: &WitnessRecord) -> ChecksJson {
    let at = |ok: bool| ok.then_some(r.depth);
    ChecksJson {
        dd_zero_depth: at(r.dd_zero),
        leibniz_depth: at(r.leibniz),
        connectedness_depth: at(r.connected),
        integral_identity: Some(r.integral_identity),
        depth: Some(r.depth),
        endomorphisms: Some(r.endomorphisms.clone()),
        commutation: Some(r.commutation),
        partials_depth: at(r.partials),
        volume_twist_depth: at(r.volume_twist),
    }
}

impl AnalysisReport {
    pub fn new(
        pres: &AlgebraPresentation,
        pbw: &PbwReport,
        verdict: Option<&SmoothnessVerdict>,
        conditions: &ConditionReport,
    ) -> Self {
        AnalysisReport {
            name: pres.name.clone(),
            n: pres.n(),
            orientation: pres.orientation().as_str(),
            pbw: pbw_json(pbw),
            verdict: verdict.map(|v| VerdictJson {
                status: v.status.as_str(),
                obstruction: v.obstruction.as_ref().map(obstruction_json),
                witness: v.witness.as_ref().map(witness_json),
                gkdim: v.gkdim,
            }),
            conditions: conditions_json(conditions),
            checks: verdict.and_then(|v| v.checks.as_ref()).map(checks_json).unwrap_or_default(),
            timings: Timings::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra: {}", self.name.as_deref().unwrap_or("(unnamed)"));
        let _ = writeln!(s, "generators: {}", self.n);
        let _ = writeln!(s, "orientation: {}", self.orientation);
        write_pbw(&mut s, &self.pbw);
        match &self.verdict {
            None => {
                let _ = writeln!(s, "verdict: none (presentation is not PBW-consistent)");
            }
            Some(v) => {
                let _ = writeln!(s, "verdict: {}", v.status);
                if let Some([i, j, k]) = v.obstruction {
                    let _ = writeln!(s, "obstruction: a({i},{j},{k}) ≠ 0");
                }
                if let Some(w) = &v.witness {
                    let _ = writeln!(s, "witness:");
                    write_twists(&mut s, w);
                }
                let _ = writeln!(s, "gkdim: {}", v.gkdim);
            }
        }
        write_checks(&mut s, &self.checks);
        if !self.conditions.is_empty() {
            let _ = writeln!(s, "conditions:");
            for c in &self.conditions {
                let idx: Vec<String> = c.indices.iter().map(|i| i.to_string()).collect();
                let _ =
                    writeln!(s, "  [{}] {} = {} at ({})", if c.holds { "ok" } else { "fail" }, c.id, c.lhs, idx.join(","));
            }
        }
        let _ = writeln!(s, "time: {:.1} ms", self.timings.total_ms);
        s
    }
}

fn write_pbw(s: &mut String, p: &PbwJson) {
    let _ = writeln!(s, "pbw: {}", if p.consistent { "consistent" } else { "inconsistent" });
    for f in &p.failures {
        let [i, j, k] = f.triple;
        let _ = writeln!(s, "  overlap x{k} x{j} x{i}: difference {}", f.difference);
    }
}

fn write_twists(s: &mut String, w: &[RhoJson]) {
    for r in w {
        let images: Vec<String> = r
            .images
            .iter()
            .filter(|im| im.generator != r.generator)
            .map(|im| format!("x{} -> {}", im.generator, im.text))
            .collect();
        let _ = writeln!(s, "  rho_{}: {}", r.generator, if images.is_empty() { "identity".into() } else { images.join(", ") });
    }
}

fn write_checks(s: &mut String, c: &ChecksJson) {
    let Some(depth) = c.depth else { return };
    let flag = |b: bool| if b { "ok" } else { "FAILED" };
    let _ = writeln!(s, "checks (degree <= {depth}):");
    if let Some(e) = &c.endomorphisms {
        let list: Vec<&str> = e.iter().map(|&b| flag(b)).collect();
        let _ = writeln!(s, "  twists respect relations: {}", list.join(" "));
    }
    if let Some(b) = c.commutation {
        let _ = writeln!(s, "  twists commute: {}", flag(b));
    }
    let _ = writeln!(s, "  d∘d = 0: {}", flag(c.dd_zero_depth.is_some()));
    let _ = writeln!(s, "  Leibniz rule: {}", flag(c.leibniz_depth.is_some()));
    let _ = writeln!(s, "  closed-form partials: {}", flag(c.partials_depth.is_some()));
    let _ = writeln!(s, "  connected: {}", flag(c.connectedness_depth.is_some()));
    let _ = writeln!(s, "  volume twist: {}", flag(c.volume_twist_depth.is_some()));
    if let Some(b) = c.integral_identity {
        let _ = writeln!(s, "  integral form: {}", flag(b));
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PbwCommandReport {
    pub name: Option<String>,
    pub n: usize,
    pub pbw: PbwJson,
    pub closed: Option<Vec<ClosedJson>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedJson {
    pub id: u8,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl PbwCommandReport {
    pub fn new(pres: &AlgebraPresentation, pbw: &PbwReport, closed: Option<&ClosedPbwReport>) -> Self {
        PbwCommandReport {
            name: pres.name.clone(),
            n: pres.n(),
            pbw: pbw_json(pbw),
            closed: closed.map(|c| {
                c.conditions
                    .iter()
                    .map(|c| ClosedJson { id: c.id, lhs: c.lhs.to_string(), rhs: c.rhs.to_string(), holds: c.holds })
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra: {}", self.name.as_deref().unwrap_or("(unnamed)"));
        let _ = writeln!(s, "generators: {}", self.n);
        write_pbw(&mut s, &self.pbw);
        if let Some(c) = &self.closed {
            let all = c.iter().all(|c| c.holds);
            let _ = writeln!(s, "closed conditions: {}", if all { "all hold" } else { "some fail" });
            for c in c {
                let _ = writeln!(s, "  [{}] ({}) {} = {}", if c.holds { "ok" } else { "fail" }, c.id, c.lhs, c.rhs);
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CalculusReport {
    pub name: Option<String>,
    pub n: usize,
    pub obstruction: Option<[usize; 3]>,
    pub twists: Option<Vec<RhoJson>>,
    pub checks: ChecksJson,
    pub passes: Option<bool>,
}

impl CalculusReport {
    pub fn obstructed(pres: &AlgebraPresentation, o: &Obstruction) -> Self {
        CalculusReport {
            name: pres.name.clone(),
            n: pres.n(),
            obstruction: Some(obstruction_json(o)),
            twists: None,
            checks: ChecksJson::default(),
            passes: None,
        }
    }

    pub fn verified(pres: &AlgebraPresentation, tw: &TwistFamily, r: &WitnessRecord) -> Self {
        CalculusReport {
            name: pres.name.clone(),
            n: pres.n(),
            obstruction: None,
            twists: Some(witness_json(tw)),
            checks: checks_json(r),
            passes: Some(r.passes()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra: {}", self.name.as_deref().unwrap_or("(unnamed)"));
        let _ = writeln!(s, "generators: {}", self.n);
        if let Some([i, j, k]) = self.obstruction {
            let _ = writeln!(s, "obstruction: a({i},{j},{k}) ≠ 0");
        }
        if let Some(t) = &self.twists {
            let _ = writeln!(s, "twists:");
            write_twists(&mut s, t);
        }
        write_checks(&mut s, &self.checks);
        if let Some(p) = self.passes {
            let _ = writeln!(s, "calculus verified: {}", if p { "yes" } else { "no" });
        }
        s
    }
}
