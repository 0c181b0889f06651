use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use toric_nash::classify::{
    analyze as analyze_surface, iterate_normalized, verify_theorems, ChartSummary, Mode, TraceNode,
};
use toric_nash::newton::Characteristic;
use toric_nash::{convergents, hj_expand, normal_form, Error, SurfaceInput, UnimodularMap};

use crate::render::{int, ints, optional, table, vector, vectors, yes_no};
use crate::Report;

pub fn expand(input: &SurfaceInput) -> Result<Report, String> {
    let (p, q, map) = match input {
        SurfaceInput::Cone(cone) => {
            let nf = normal_form(cone);
            (nf.p, nf.q, nf.map)
        }
        SurfaceInput::Fraction(p, q) => (p.clone(), q.clone(), UnimodularMap::identity()),
        SurfaceInput::ContinuedFraction(cf) => {
            let (p, q) = toric_nash::evaluate(cf);
            (p, q, UnimodularMap::identity())
        }
    };
    let [a, b, c, d] = map.entries();
    let mut doc = Map::new();
    doc.insert("p".into(), int(&p));
    doc.insert("q".into(), int(&q));
    doc.insert("map".into(), json!([[int(a), int(b)], [int(c), int(d)]]));
    let mut text = format!("P/Q = {p}/{q}\nmap = [[{a}, {b}], [{c}, {d}]]\n");

    match hj_expand(&p, &q) {
        Ok(cf) => {
            let t = convergents(&cf);
            doc.insert("cf".into(), ints(cf.terms()));
            doc.insert(
                "convergents".into(),
                json!({
                    "p": ints(t.p_with_minus_one()),
                    "q": ints(t.q_all()),
                    "v": vectors(&t.vectors()),
                }),
            );
            doc.insert("note".into(), Value::Null);
            let _ = writeln!(text, "continued fraction {cf}\n");
            let mut rows = vec![vec!["-1".into(), String::new(), "0".into(), String::new()]];
            for i in 0..=t.r() {
                let a_i = if i == 0 {
                    String::new()
                } else {
                    cf.a(i).to_string()
                };
                rows.push(vec![
                    i.to_string(),
                    a_i,
                    t.p(i).to_string(),
                    t.q(i).to_string(),
                ]);
            }
            text.push_str(&table(&["i", "a_i", "p_i", "q_i"], &rows));
        }
        Err(Error::Smooth) => {
            doc.insert("cf".into(), Value::Null);
            doc.insert("convergents".into(), Value::Null);
            doc.insert("note".into(), json!("already smooth"));
            text.push_str("already smooth\n");
        }
        Err(e) => return Err(e.to_string()),
    }
    Ok(Report {
        json: Value::Object(doc),
        text,
        mismatch: false,
    })
}

pub fn analyze(input: &SurfaceInput, mode: Mode, char_p: Characteristic) -> Result<Report, String> {
    let report = analyze_surface(input, mode, char_p).map_err(|e| e.to_string())?;
    let failing: Vec<usize> = report
        .vertices
        .iter()
        .filter(|v| !v.smooth)
        .map(|v| v.index)
        .collect();

    let vertices: Vec<Value> = report
        .vertices
        .iter()
        .map(|v| {
            let chart = match &v.chart {
                ChartSummary::Normalized { gen1, gen2 } => json!({ "gen1": vector(gen1), "gen2": vector(gen2) }),
                ChartSummary::Nash { minimal_generators, localization, saturation, smooth_by_saturation } => json!({
                    "minimal_generators": vectors(minimal_generators),
                    "localization": [vector(&localization.0), vector(&localization.1)],
                    "saturated": saturation.saturated,
                    "witness": optional(saturation.witness.as_ref(), vector),
                    "witness_multiple": optional(saturation.witness_multiple.as_ref(), int),
                    "smooth_by_saturation": smooth_by_saturation,
                }),
            };
            json!({ "index": v.index, "point": vector(&v.point), "chart": chart, "smooth": v.smooth })
        })
        .collect();
    let doc = json!({
        "p": int(&report.p),
        "q": int(&report.q),
        "cf": optional(report.cf.as_ref(), |cf| ints(cf.terms())),
        "mode": report.mode.name(),
        "char_p": int(&report.char_p),
        "vertices": vertices,
        "failing_vertices": failing,
        "all_smooth": report.all_smooth,
        "predicate_verdict": report.predicate_verdict,
        "consistent": report.consistent,
        "vertices_cross_checked": report.vertices_cross_checked,
        "routes_agree": report.routes_agree,
        "note": report.note,
    });

    let mut text = format!("P/Q = {}/{}", report.p, report.q);
    if let Some(cf) = &report.cf {
        let _ = write!(text, "  cf {cf}");
    }
    let _ = writeln!(
        text,
        "\nmode {}, characteristic {}\n",
        report.mode.name(),
        report.char_p
    );
    if let Some(note) = &report.note {
        let _ = writeln!(text, "{note}");
    } else {
        let rows: Vec<Vec<String>> = report
            .vertices
            .iter()
            .map(|v| {
                let (gens, extra) = match &v.chart {
                    ChartSummary::Normalized { gen1, gen2 } => {
                        (format!("{gen1} {gen2}"), String::new())
                    }
                    ChartSummary::Nash {
                        minimal_generators,
                        saturation,
                        ..
                    } => {
                        let gens = minimal_generators
                            .iter()
                            .map(|g| g.to_string())
                            .collect::<Vec<_>>()
                            .join(" ");
                        let extra = match (&saturation.witness, &saturation.witness_multiple) {
                            (Some(w), Some(k)) => format!("missing {w}, {k}*{w} present"),
                            _ => "saturated".to_string(),
                        };
                        (gens, extra)
                    }
                };
                vec![
                    v.index.to_string(),
                    v.point.to_string(),
                    gens,
                    yes_no(v.smooth).into(),
                    extra,
                ]
            })
            .collect();
        text.push_str(&table(
            &["vertex", "point", "generators", "smooth", "saturation"],
            &rows,
        ));
    }
    let _ = writeln!(
        text,
        "\nall smooth: {}  classification: {}  consistent: {}  cross-checks: {}",
        yes_no(report.all_smooth),
        yes_no(report.predicate_verdict),
        yes_no(report.consistent),
        yes_no(report.vertices_cross_checked && report.routes_agree),
    );
    Ok(Report {
        json: doc,
        text,
        mismatch: !report.fully_consistent(),
    })
}

pub fn verify(max_r: usize, max_a: u32, mode: Mode, workers: usize) -> Result<Report, String> {
    let s = verify_theorems::<BigInt>(max_r, max_a, mode, workers).map_err(|e| e.to_string())?;
    let fractions = |list: &[Vec<u32>]| -> Value { Value::Array(list.iter().map(ints).collect()) };
    let doc = json!({
        "max_r": s.max_r,
        "max_a": s.max_a,
        "mode": s.mode.name(),
        "total_checked": s.total_checked,
        "smooth_count": s.smooth_count,
        "mismatches": fractions(&s.mismatches),
        "cross_check_failures": fractions(&s.cross_check_failures),
        "passed": s.passed(),
    });
    let mut text = format!(
        "{} mode, r <= {}, a <= {}: {} surfaces, {} smooth after one blowup\nmismatches: {}\ncross-check failures: {}\n",
        s.mode.name(),
        s.max_r,
        s.max_a,
        s.total_checked,
        s.smooth_count,
        s.mismatches.len(),
        s.cross_check_failures.len()
    );
    for terms in s.mismatches.iter().chain(&s.cross_check_failures) {
        let _ = writeln!(text, "  {terms:?}");
    }
    text.push_str(if s.passed() { "PASSED\n" } else { "FAILED\n" });
    Ok(Report {
        json: doc,
        text,
        mismatch: !s.passed(),
    })
}

pub fn iterate(input: &SurfaceInput, max_steps: usize) -> Result<Report, String> {
    let trace = iterate_normalized(input, max_steps).map_err(|e| e.to_string())?;
    let doc = json!({
        "max_steps": max_steps,
        "depth": trace.depth,
        "complete": trace.complete,
        "root": node_json(&trace.root),
    });
    let mut text = String::new();
    node_text(&trace.root, 0, &mut text);
    let _ = writeln!(
        text,
        "\ndepth {}, {}",
        trace.depth,
        if trace.complete {
            "complete"
        } else {
            "truncated"
        }
    );
    Ok(Report {
        json: doc,
        text,
        mismatch: false,
    })
}

fn node_json(node: &TraceNode<BigInt>) -> Value {
    json!({
        "p": int(&node.p),
        "q": int(&node.q),
        "children": node.children.iter().map(node_json).collect::<Vec<_>>(),
        "truncated": node.truncated,
    })
}

fn node_text(node: &TraceNode<BigInt>, level: usize, out: &mut String) {
    let _ = write!(
        out,
        "{:indent$}{}/{}",
        "",
        node.p,
        node.q,
        indent = 2 * level
    );
    if node.truncated {
        out.push_str(" (not expanded)");
    } else if node.children.is_empty() {
        out.push_str(" all charts smooth");
    }
    out.push('\n');
    for child in &node.children {
        node_text(child, level + 1, out);
    }
}
