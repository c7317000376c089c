use std::fmt::Write as _;
use std::path::Path;

use serde_json::json;

use compdyn_core::analytic::{modulus_radius, sup_image_deviation, LogTarget};
use compdyn_core::dynamics::{
    classify, classify_table, default_probe, probe_set, verify_claims, DynamicsError, Map,
};
use compdyn_core::geometry::{verify_structure, CarlemanFamily, GShape, StructureCertificate, Window};
use compdyn_core::oracle::{deviation_crossing, sampled_deviation};
use compdyn_core::schedule::{
    builtin, parse_schedule, Cell, ErrorKind, Family, Mode, Schedule, ScheduleError, ScheduleSet, TheoremId,
};
use compdyn_core::{Exec, Region};

use crate::diagram::emit_diagram;
use crate::report::{ErrorInfo, ReportDocument};
use crate::FamilyChoice;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CLAIM: u8 = 1;
pub const EXIT_SYNTAX: u8 = 2;
pub const EXIT_SEMANTIC: u8 = 3;
pub const EXIT_IO: u8 = 4;

const MODULUS_SAMPLES: usize = 4096;

pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub doc: ReportDocument,
}

impl Outcome {
    fn ok(doc: ReportDocument, text: String) -> Self {
        let code = if doc.summary.failed > 0 { EXIT_CLAIM } else { EXIT_OK };
        Outcome { code, text, doc }
    }

    fn fail(code: u8, mut doc: ReportDocument, info: ErrorInfo) -> Self {
        let mut text = format!("error[{}]: {}", info.code, info.message);
        if let Some(w) = &info.witness {
            let _ = write!(text, " (witness {w})");
        }
        text.push('\n');
        doc.error = Some(info);
        Outcome { code, text, doc }
    }

    fn plain(code: u8, doc: ReportDocument, error_code: &str, message: String) -> Self {
        Self::fail(code, doc, ErrorInfo { code: error_code.into(), message, line: None, col: None, witness: None })
    }
}

fn schedule_failure(doc: ReportDocument, e: &ScheduleError) -> Outcome {
    let code = if e.kind == ErrorKind::Syntax { EXIT_SYNTAX } else { EXIT_SEMANTIC };
    let mut out = Outcome::fail(code, doc, ErrorInfo::from(e));
    if e.line > 0 {
        out.text = format!("{}:{}: {}", e.line, e.col, out.text);
    }
    out
}

fn dynamics_failure(doc: ReportDocument, e: &DynamicsError) -> Outcome {
    match e {
        DynamicsError::Schedule(s) => schedule_failure(doc, s),
        DynamicsError::Undecided { .. } => Outcome::plain(EXIT_SEMANTIC, doc, "E_UNDECIDED", e.to_string()),
    }
}

fn read(doc: ReportDocument, path: &Path) -> Result<String, Box<Outcome>> {
    std::fs::read_to_string(path)
        .map_err(|e| Box::new(Outcome::plain(EXIT_IO, doc, "E_IO", format!("{}: {e}", path.display()))))
}

pub fn validate(file: &Path) -> Outcome {
    let doc = ReportDocument::new("validate").input("file", file.display().to_string());
    let text = match read(doc.clone(), file) {
        Ok(t) => t,
        Err(o) => return *o,
    };
    let set = match parse_schedule(&text) {
        Ok(s) => s,
        Err(e) => return schedule_failure(doc, &e),
    };
    let mut doc = doc.param("mode", set.mode.to_string());
    let mut out = format!("{}: valid ({} mode)\n", file.display(), set.mode);
    for s in &set.specs {
        let _ = writeln!(
            out,
            "  [{}] {} rules, threshold {}, max drop {}",
            s.name(),
            s.rules().len(),
            s.threshold(),
            s.max_drop()
        );
        doc.row(
            json!({
                "section": s.name(),
                "rules": s.rules().len(),
                "threshold": s.threshold(),
                "max_drop": s.max_drop(),
            }),
            None,
        );
    }
    Outcome::ok(doc, out)
}

/// `Base`, `G0` (part of the base piece), `G12`, `B3`, or `G(0,3)` in grid mode.
pub fn parse_region(mode: Mode, s: &str) -> Option<Region> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("base") || s == "G0" {
        return Some(Region::Base);
    }
    let family = match s.as_bytes().first()? {
        b'G' | b'g' => Family::G,
        b'B' | b'b' => Family::B,
        _ => return None,
    };
    let rest = &s[1..];
    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        if mode != Mode::Grid {
            return None;
        }
        let (p, q) = inner.split_once(',')?;
        let cell = Cell::new(family, [p.trim().parse().ok()?, q.trim().parse().ok()?]);
        if cell.slots[0] < 0 || cell.slots[1] < 1 {
            return None;
        }
        return mode.region(&cell).ok();
    }
    let k: i64 = rest.parse().ok()?;
    match family {
        Family::G => Region::g(k).ok(),
        _ => Region::b(k).ok(),
    }
}

pub fn classify_cmd(theorem: Option<TheoremId>, spec: Option<&Path>, region: &str, map: &str) -> Outcome {
    let map = Map::parse(map).expect("restricted by the argument parser");
    let mut doc = ReportDocument::new("classify").input("region", region).input("map", map.as_str());
    let owned: ScheduleSet;
    let (f, g): (&dyn Schedule, Option<&dyn Schedule>) = match (theorem, spec) {
        (Some(id), _) => {
            doc = doc.input("theorem", id.as_str());
            let p = builtin(id);
            (&p.f, Some(&p.g))
        }
        (None, Some(path)) => {
            doc = doc.input("spec", path.display().to_string());
            doc.notes.push("schedule-level only: component-level conclusions are not implied for user specs".into());
            let text = match read(doc.clone(), path) {
                Ok(t) => t,
                Err(o) => return *o,
            };
            owned = match parse_schedule(&text) {
                Ok(s) => s,
                Err(e) => return schedule_failure(doc, &e),
            };
            let f = owned.get("f").unwrap_or(&owned.specs[0]);
            (f, owned.get("g").map(|g| g as &dyn Schedule))
        }
        (None, None) => unreachable!("required by the argument parser"),
    };
    let Some(r) = parse_region(f.mode(), region) else {
        return Outcome::plain(EXIT_SYNTAX, doc, "E_SYNTAX", format!("cannot read region '{region}' in {} mode", f.mode()));
    };
    let g = match (g, map) {
        (Some(g), _) => g,
        (None, Map::F) => f,
        (None, _) => {
            return Outcome::plain(EXIT_SEMANTIC, doc, "E_DOMAIN", format!("map {map} needs a [g] section"));
        }
    };
    let class = match map.with(f, g, |s| classify(s, r)) {
        Ok(c) => c,
        Err(e) => return dynamics_failure(doc, &e),
    };
    let label = f.mode().display(r);
    let mut text = format!("{label} under {map}: {}\n", class.summary());
    if let compdyn_core::OrbitClass::Wandering { certificate } = &class {
        let path: Vec<String> = certificate.transient.iter().map(|r| f.mode().display(*r)).collect();
        let _ = writeln!(text, "  transient: {}", path.join(" -> "));
        for e in &certificate.guard_cycle {
            let rules: Vec<&str> = e.rules.iter().map(|r| r.text.as_str()).collect();
            let _ = writeln!(text, "  cycle: {}", rules.join(" ; "));
        }
    }
    for n in &doc.notes {
        let _ = writeln!(text, "note: {n}");
    }
    doc.row(json!({ "region": label, "map": map.as_str(), "class": class }), None);
    Outcome::ok(doc, text)
}

pub fn table(id: TheoremId, max_index: Option<i64>, exec: Exec) -> Outcome {
    let p = builtin(id);
    let mode = p.f.mode();
    let probe = match max_index {
        Some(n) => probe_set(mode, n),
        None => default_probe(mode),
    };
    let mut doc = ReportDocument::new("table")
        .input("theorem", id.as_str())
        .param("max_index", max_index.unwrap_or(if mode == Mode::Linear { 40 } else { 8 }))
        .param("mode", mode.to_string());
    let rows = match classify_table(&p.f, &p.g, &probe, exec) {
        Ok(r) => r,
        Err(e) => return dynamics_failure(doc, &e),
    };
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(6).max(6);
    let mut text = format!("{:width$}  {:>2} {:>2} {:>2} {:>2}\n", "region", "f", "g", "gf", "fg");
    for row in &rows {
        let k = row.kinds();
        let _ = writeln!(
            text,
            "{:width$}  {:>2} {:>2} {:>2} {:>2}",
            row.label,
            k[0].letter(),
            k[1].letter(),
            k[2].letter(),
            k[3].letter()
        );
        doc.row(
            json!({
                "region": row.label,
                "f": row.classes[0],
                "g": row.classes[1],
                "gf": row.classes[2],
                "fg": row.classes[3],
            }),
            None,
        );
    }
    text.push_str("p periodic, r preperiodic, w wandering\n");
    Outcome::ok(doc, text)
}

pub fn verify(theorem: &str, exec: Exec) -> Outcome {
    let mut doc = ReportDocument::new("verify").input("theorem", theorem);
    let ids: Vec<TheoremId> = if theorem == "all" {
        TheoremId::ALL.to_vec()
    } else {
        match theorem.parse() {
            Ok(id) => vec![id],
            Err(e) => return Outcome::plain(EXIT_SYNTAX, doc, "E_SYNTAX", format!("{e}")),
        }
    };
    doc = doc.param("probe_linear", 40).param("probe_grid", 8);
    let mut text = String::new();
    for id in ids {
        let report = match verify_claims(id, exec) {
            Ok(r) => r,
            Err(e) => return dynamics_failure(doc, &e),
        };
        let _ = writeln!(text, "{id}: {}/{} claims hold", report.pass_count(), report.results.len());
        for r in &report.results {
            let mark = if r.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(text, "  {mark} {} ({} regions)", r.label(), r.instances);
            for (region, kind) in &r.failures {
                let _ = writeln!(text, "         {region} is {kind}");
            }
            doc.row(
                json!({
                    "theorem": id.as_str(),
                    "claim": r.label(),
                    "instances": r.instances,
                    "failures": r.failures,
                    "passed": r.passed,
                }),
                Some(r.passed),
            );
        }
    }
    let _ = writeln!(text, "{} of {} claims hold", doc.summary.passed, doc.summary.total);
    Outcome::ok(doc, text)
}

pub fn modulus(c: i64, exec: Exec) -> Outcome {
    let mut doc = ReportDocument::new("modulus").input("center", c.to_string()).param("samples", MODULUS_SAMPLES);
    let lt = match LogTarget::new(c) {
        Ok(lt) => lt,
        Err(e) => return Outcome::plain(EXIT_SEMANTIC, doc, "E_DOMAIN", e.to_string()),
    };
    let mag = c.unsigned_abs() as f64;
    let radius = modulus_radius(mag).expect("checked by LogTarget");
    let deviation = sup_image_deviation(mag, radius).expect("non-negative radius");
    let sampled = sampled_deviation(&lt, radius, MODULUS_SAMPLES, exec);
    let crossing = deviation_crossing(&lt, 0.5, MODULUS_SAMPLES, exec);
    let agrees = (crossing - radius).abs() < 1e-6 && (deviation - 0.5).abs() < 1e-12;
    let text = format!(
        "center {c}\n  radius ln(1 + 1/(2|c|)) = {radius:.17}\n  deviation at radius    = {deviation:.17}\n  sampled deviation      = {sampled:.17}\n  oracle crossing of 1/2 = {crossing:.17}\n  agreement: {}\n",
        if agrees { "yes" } else { "no" }
    );
    doc.row(
        json!({
            "center": c,
            "radius": radius,
            "deviation_at_radius": deviation,
            "sampled_deviation": sampled,
            "oracle_crossing": crossing,
            "agrees": agrees,
        }),
        Some(agrees),
    );
    Outcome::ok(doc, text)
}

fn family(choice: FamilyChoice) -> CarlemanFamily {
    match choice {
        FamilyChoice::Paper => CarlemanFamily::paper(),
        FamilyChoice::HalfPlane => CarlemanFamily { g_shape: GShape::UpperHalfPlane, ..CarlemanFamily::paper() },
        FamilyChoice::Overlap => CarlemanFamily { extra_disks: vec![(-6, 1)], ..CarlemanFamily::paper() },
    }
}

fn structure_rows(cert: &StructureCertificate) -> Vec<(&'static str, bool, String)> {
    vec![
        (
            "complement connected",
            cert.condition_i.passed,
            format!("{} component(s)", cert.condition_i.components),
        ),
        (
            "complement locally connected at infinity",
            cert.condition_ii.passed,
            format!("{} ring(s), slack {}", cert.condition_ii.rings.len(), cert.condition_ii.slack),
        ),
        (
            "bounded interior components",
            cert.condition_iii_passed(),
            match cert.condition_iii_bound {
                Some(d) => format!("diameter <= {d}"),
                None => "unbounded".into(),
            },
        ),
        ("pieces disjoint", cert.disjoint, format!("min gap {}", cert.min_gap)),
    ]
}

pub fn check_family(window: f64, step: f64, choice: FamilyChoice, exec: Exec) -> Outcome {
    let name = format!("{choice:?}").to_lowercase();
    let mut doc = ReportDocument::new("check-family")
        .input("family", name.clone())
        .param("window", window)
        .param("step", step);
    if !(step > 0.0) || !(window >= 0.0) {
        return Outcome::plain(EXIT_SEMANTIC, doc, "E_DOMAIN", "window must be >= 0 and step > 0".into());
    }
    let cert = verify_structure(&family(choice), Window::square(window), step, exec);
    let mut text = format!("family {name} on [-{window},{window}]^2, step {step}\n");
    for (check, passed, detail) in structure_rows(&cert) {
        let _ = writeln!(text, "  {} {check}: {detail}", if passed { "ok  " } else { "FAIL" });
        doc.row(json!({ "check": check, "passed": passed, "detail": detail }), Some(passed));
    }
    if cert.rays_clipped {
        text.push_str("  rays clipped to the window\n");
        doc.notes.push("rays clipped to the window".into());
    }
    Outcome::ok(doc, text)
}

pub fn diagram(id: TheoremId, out: &Path, window: f64) -> Outcome {
    let mut doc = ReportDocument::new("diagram")
        .input("theorem", id.as_str())
        .input("out", out.display().to_string())
        .param("window", window);
    let d = emit_diagram(id, Window::square(window));
    if let Err(e) = std::fs::write(out, &d.svg) {
        return Outcome::plain(EXIT_IO, doc, "E_IO", format!("{}: {e}", out.display()));
    }
    doc.row(json!({ "arrows": d.arrows, "bytes": d.svg.len() }), None);
    Outcome::ok(doc, format!("wrote {} ({} arrows)\n", out.display(), d.arrows))
}
