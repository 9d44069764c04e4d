//! Commands behind the `chamberlab` binary. Each command returns a
//! [`RunReport`] and an exit code; the binary only parses arguments and
//! writes the report.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use chamberlab::f2::{
    apartment_census, check_rgd, distinct_stabilized_panels_check, doily, fano_plane, load_incidence,
    root_group_datum_a2, root_group_datum_b2, stabilized_panels_set, validate_building, FlagBuilding,
};
use chamberlab::triangles::{
    enumerate_reflection_triangles, orient_reflection_triangle, pairwise_projection_chamber,
    sigma_triangle_from_reflection_triangle, triangle_intersection, WallIndex,
};
use chamberlab::verify::{run_suite, Fault};
use chamberlab::{Building, CoxeterComplex, CoxeterGroup, CoxeterMatrix, Error};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Environment variable that overrides `--max-elements`.
pub const MAX_ELEMENTS_ENV: &str = "CHAMBERLAB_MAX_ELEMENTS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_PROPERTY: i32 = 5;

/// The JSON document every command emits.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of each input file, keyed by the path as given.
    pub inputs: BTreeMap<String, String>,
    pub parameters: Value,
    pub results: Value,
    pub violations: Vec<Value>,
    pub wall_clock_ms: u64,
}

impl RunReport {
    fn new(command: &str, parameters: Value) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            parameters,
            results: Value::Null,
            violations: Vec::new(),
            wall_clock_ms: 0,
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "results": self.results,
            "violations": self.violations,
            "wall_clock_ms": self.wall_clock_ms,
        })
    }

    /// Compact JSON with sorted keys.
    pub fn to_json(&self) -> String {
        // serde_json maps are ordered by key unless preserve_order is on
        self.to_value().to_string()
    }

    /// The report without its timing, which is all that determinism covers.
    pub fn body(&self) -> String {
        let mut v = self.to_value();
        v.as_object_mut().unwrap().remove("wall_clock_ms");
        v.to_string()
    }
}

/// A finished command: the report and the process exit code.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: RunReport,
    pub exit_code: i32,
}

/// Exit code for a library error.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Validation(_) | Error::NotSpherical(_) | Error::Rank(_) | Error::NotReflection(_) => {
            EXIT_INPUT
        }
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        Error::ResourceLimit(_) | Error::BudgetExceeded(_) | Error::BallInconclusive { .. } => EXIT_RESOURCE,
        Error::LemmaViolation { .. } | Error::TheoremViolation { .. } => EXIT_PROPERTY,
        _ => EXIT_INTERNAL,
    }
}

/// Error report for a command that could not run.
fn failed(mut report: RunReport, e: &Error, started: Instant) -> Outcome {
    report.results = json!({ "error": e.to_string() });
    if let Error::LemmaViolation { witness, .. } | Error::TheoremViolation { witness, .. } = e {
        report.violations.push(json!({ "error": e.to_string(), "witness": witness }));
    }
    report.wall_clock_ms = started.elapsed().as_millis() as u64;
    Outcome {
        exit_code: exit_code_for(e),
        report,
    }
}

fn finish(mut report: RunReport, exit_code: i32, started: Instant) -> Outcome {
    report.wall_clock_ms = started.elapsed().as_millis() as u64;
    Outcome { report, exit_code }
}

fn read_input(report: &mut RunReport, path: &Path) -> Result<String, Error> {
    let bytes = fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    report
        .inputs
        .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
    String::from_utf8(bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// The ball cap: the environment variable wins over the flag.
pub fn effective_max_elements(flag: Option<usize>) -> Result<Option<usize>, Error> {
    match std::env::var(MAX_ELEMENTS_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Validation(format!("{MAX_ELEMENTS_ENV} must be an unsigned integer, got {text:?}"))),
        Err(_) => Ok(flag),
    }
}

fn load_complex(report: &mut RunReport, path: &Path, max_elements: Option<usize>) -> Result<CoxeterComplex, Error> {
    let text = read_input(report, path)?;
    let matrix = CoxeterMatrix::from_json(&text)?;
    let mut group = CoxeterGroup::new(matrix);
    if let Some(cap) = effective_max_elements(max_elements)? {
        group = group.with_max_elements(cap);
    }
    Ok(CoxeterComplex::new(group))
}

/// Diagram properties and the spherical subsets of size at most 3.
pub fn cmd_check(diagram: &Path) -> Outcome {
    let started = Instant::now();
    let mut report = RunReport::new("check", json!({}));
    let text = match read_input(&mut report, diagram) {
        Ok(t) => t,
        Err(e) => return failed(report, &e, started),
    };
    let m = match CoxeterMatrix::from_json(&text) {
        Ok(m) => m,
        Err(e) => return failed(report, &e, started),
    };
    let spherical: Vec<Value> = m
        .spherical_subsets(3)
        .into_iter()
        .filter(|j| !j.is_empty())
        .map(|j| {
            let types: Vec<String> = m
                .classify(j)
                .unwrap_or_default()
                .iter()
                .map(|t| t.to_string())
                .collect();
            json!({ "subset": m.format_subset(j), "type": types })
        })
        .collect();
    report.results = json!({
        "rank": m.rank(),
        "generators": m.names(),
        "two_spherical": m.is_two_spherical(),
        "two_complete": m.is_two_complete(),
        "a2tilde_free": m.is_a2tilde_free(),
        "two_dimensional": m.is_two_dimensional(),
        "spherical_subsets": spherical,
    });
    finish(report, EXIT_OK, started)
}

/// Enumerates reflection triangles in a ball and, with `verify`, checks that
/// each yields a triangle meeting in one chamber.
pub fn cmd_triangles(diagram: &Path, radius: usize, verify: bool, max_elements: Option<usize>) -> Outcome {
    let started = Instant::now();
    let mut report = RunReport::new("triangles", json!({ "radius": radius, "verify": verify }));
    let cx = match load_complex(&mut report, diagram, max_elements) {
        Ok(cx) => cx,
        Err(e) => return failed(report, &e, started),
    };
    match triangles(&cx, radius, verify, &mut report) {
        Ok(()) => {
            let code = if report.violations.is_empty() { EXIT_OK } else { EXIT_PROPERTY };
            finish(report, code, started)
        }
        Err(e) => failed(report, &e, started),
    }
}

fn triangles(cx: &CoxeterComplex, radius: usize, verify: bool, report: &mut RunReport) -> Result<(), Error> {
    let m = cx.matrix();
    if !m.is_two_complete() {
        return Err(Error::Hypothesis("the type is not 2-complete".into()));
    }
    if !m.is_a2tilde_free() {
        return Err(Error::Hypothesis("the type contains an affine A2 triple".into()));
    }
    let idx = WallIndex::build(cx, radius)?;
    let found = enumerate_reflection_triangles(&idx)?;
    let g = cx.group();
    let mut listed = Vec::new();
    let mut verified = 0;
    for rs in &found {
        let reflections: Vec<String> = rs.iter().map(|t| g.format(t)).collect();
        if !verify {
            listed.push(json!({ "reflections": reflections }));
            continue;
        }
        let outcome = (|| -> Result<Value, Error> {
            let roots = orient_reflection_triangle(&idx, rs)?;
            let t = sigma_triangle_from_reflection_triangle(&idx, rs)?;
            let chamber = triangle_intersection(cx, &t)?;
            let mut pairwise = Vec::new();
            for r in &t.residues {
                let c = pairwise_projection_chamber(cx, &t, r)?;
                pairwise.push(json!({ "residue": cx.format_residue(r), "chamber": cx.chamber_label(&c) }));
            }
            Ok(json!({
                "reflections": reflections,
                "roots": roots.iter().map(|a| cx.format_root(a)).collect::<Vec<_>>(),
                "residues": t.residues.iter().map(|r| cx.format_residue(r)).collect::<Vec<_>>(),
                "chamber": cx.chamber_label(&chamber),
                "pairwise": pairwise,
            }))
        })();
        match outcome {
            Ok(v) => {
                verified += 1;
                listed.push(v);
            }
            Err(e @ (Error::LemmaViolation { .. } | Error::TheoremViolation { .. } | Error::PreconditionFailed(_))) => {
                report.violations.push(json!({ "reflections": reflections, "error": e.to_string() }));
            }
            Err(e) => return Err(e),
        }
    }
    report.results = json!({
        "ball_radius": radius,
        "instances_checked": if verify { found.len() } else { 0 },
        "residues_indexed": idx.residues().len(),
        "triangles_found": found.len(),
        "triangles_verified": verified,
        "triangles": listed,
    });
    Ok(())
}

/// What `cmd_building` should do with the geometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildingAction {
    Validate,
    Show,
}

/// Validates the flag complex of an incidence file as a generalized polygon
/// building, or prints its chamber and panel census.
pub fn cmd_building(action: BuildingAction, incidence: &Path, gonality: usize) -> Outcome {
    let started = Instant::now();
    let name = match action {
        BuildingAction::Validate => "building validate",
        BuildingAction::Show => "building show",
    };
    let mut report = RunReport::new(name, json!({ "gonality": gonality }));
    let built = read_input(&mut report, incidence)
        .and_then(|text| load_incidence(&text))
        .and_then(|g| FlagBuilding::new(g, gonality));
    let b = match built {
        Ok(b) => b,
        Err(e) => return failed(report, &e, started),
    };
    match action {
        BuildingAction::Validate => {
            let v = validate_building(&b);
            let passed = v.passed();
            report.violations = v.violations.iter().map(|s| json!(s)).collect();
            report.results = json!({ "passed": passed, "report": v });
            finish(report, if passed { EXIT_OK } else { EXIT_INPUT }, started)
        }
        BuildingAction::Show => {
            let mut census: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
            for (s, chambers) in b.panels() {
                let label = b.group().matrix().name(s).to_string();
                *census.entry(label).or_default().entry(chambers.len()).or_default() += 1;
            }
            let panels: usize = census.values().flat_map(|m| m.values()).sum();
            report.results = json!({
                "chambers": b.num_chambers(),
                "points": b.geometry().num_points(),
                "lines": b.geometry().num_lines(),
                "panels": panels,
                "panel_sizes_by_type": census
                    .iter()
                    .map(|(t, sizes)| (t.clone(), sizes.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>()))
                    .collect::<BTreeMap<_, _>>(),
                "apartments": apartment_census(&b),
            });
            finish(report, EXIT_OK, started)
        }
    }
}

/// Which root group datum `cmd_rgd` builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RgdKind {
    A2,
    B2,
}

/// Builds a root group datum over GF(2), checks the axioms and the panels
/// stabilized by the rank-one groups. Verdicts go into the report.
pub fn cmd_rgd(kind: RgdKind) -> Outcome {
    let started = Instant::now();
    let label = match kind {
        RgdKind::A2 => "a2",
        RgdKind::B2 => "b2",
    };
    let mut report = RunReport::new("rgd", json!({ "kind": label }));
    let datum = match kind {
        RgdKind::A2 => FlagBuilding::new(fano_plane(), 3).and_then(root_group_datum_a2),
        RgdKind::B2 => FlagBuilding::new(doily(), 4).and_then(root_group_datum_b2),
    };
    let d = match datum {
        Ok(d) => d,
        Err(e) => return failed(report, &e, started),
    };
    let b = d.building();
    let axioms = check_rgd(&d);
    let stabilized = stabilized_panels_set(&d);
    let distinct = distinct_stabilized_panels_check(&d);
    let labels = |set: &std::collections::BTreeSet<usize>| set.iter().map(|c| b.chamber_label(c)).collect::<Vec<_>>();
    let root_groups: BTreeMap<String, usize> = d
        .roots()
        .iter()
        .map(|a| (d.complex().format_root(a), d.root_group(a).order()))
        .collect();
    for f in &axioms.failures {
        report.violations.push(json!({ "axiom": f }));
    }
    for w in &distinct.counterexamples {
        report.violations.push(json!({ "distinct_stabilized_panels": w }));
    }
    if !stabilized.matches {
        report.violations.push(json!({ "stabilized_panels": labels(&stabilized.chambers) }));
    }
    report.results = json!({
        "chambers": b.num_chambers(),
        "c_plus": b.chamber_label(&d.c_plus()),
        "c_minus": b.chamber_label(&d.c_minus()),
        "root_group_orders": root_groups,
        "group_order": axioms.group_order,
        "torus_order": axioms.torus_order,
        "axioms": axioms,
        "all_axioms_pass": axioms.all_pass(),
        "stabilized_panels": {
            "chambers": labels(&stabilized.chambers),
            "expected": labels(&stabilized.expected),
            "matches": stabilized.matches,
        },
        "distinct_stabilized_panels": {
            "instances": distinct.instances,
            "holds": distinct.holds(),
        },
    });
    finish(report, EXIT_OK, started)
}

/// Runs the property registry with seeded sampling. Exit code 5 when any
/// property has a counterexample.
pub fn cmd_property_suite(
    diagram: &Path,
    radius: usize,
    seed: u64,
    max_elements: Option<usize>,
    fault: Option<Fault>,
) -> Outcome {
    let started = Instant::now();
    let mut parameters = json!({ "radius": radius, "seed": seed });
    if let Some(f) = fault {
        parameters["inject_fault"] = json!(f);
    }
    let mut report = RunReport::new("property-suite", parameters);
    let cx = match load_complex(&mut report, diagram, max_elements) {
        Ok(cx) => cx,
        Err(e) => return failed(report, &e, started),
    };
    let suite = match run_suite(&cx, radius, seed, fault) {
        Ok(s) => s,
        Err(e) => return failed(report, &e, started),
    };
    for p in suite.properties.iter().filter(|p| !p.passed()) {
        for w in &p.witnesses {
            report.violations.push(json!({ "property": p.name, "witness": w }));
        }
    }
    let passed = suite.passed();
    report.results = json!({
        "ball_radius": radius,
        "instances_checked": suite.properties.iter().map(|p| p.instances).sum::<usize>(),
        "passed": passed,
        "properties": suite.properties,
    });
    finish(report, if passed { EXIT_OK } else { EXIT_PROPERTY }, started)
}
