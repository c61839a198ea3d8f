//! One handler per subcommand.

use fa_core::automata::{count::exact_counts, is_sparse, parikh_image, Dfa, Sparsity};
use fa_core::fauto::{is_f_sparse, kernel_of, AutomaticSet, FSparsity};
use fa_core::modeltheory::polysnip::Reading;
use fa_core::modeltheory::{ladder_search, poly_string, polysnip_demo, EdpSet, LadderMode, LadderOutcome};
use fa_core::spanning::{eigen_gate, search_spanning, EigenWitness, GateVerdict, LengthFunction, SpanCheck, SpanningSet};
use fa_core::{Caps, Element, Group};
use serde_json::{json, Value};

use crate::expr;
use crate::formats::*;
use crate::workspace::{read_json, Binding, Workspace};
use crate::*;

pub fn dispatch(cli: &Cli, caps: Caps) -> Result<Report, CliError> {
    let mut ws = Workspace::open(cli.workspace.clone(), caps)?;
    match &cli.cmd {
        Cmd::Group(c) => group(&ws, c),
        Cmd::Span(c) => span(&mut ws, c),
        Cmd::Lang(c) => lang(c),
        Cmd::Presburger(c) => presburger(c, caps),
        Cmd::Set(c) => set(&mut ws, c),
        Cmd::Mt(c) => mt(&mut ws, c),
        Cmd::Demo(c) => demo(c, caps),
    }
}

/// Elements in text: polynomials for 𝔽_p[t], coordinates otherwise.
fn show(g: &Group, e: &Element) -> String {
    if g.is_poly() {
        return poly_string(e);
    }
    if g.is_zero(e) {
        return "0".into();
    }
    match e.0.as_slice() {
        [x] => x.to_string(),
        xs => format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
    }
}

fn parse_elem(text: &str) -> Result<Element, CliError> {
    elem_from(&parse_json(text, "element")?)
}

fn group(ws: &Workspace, c: &GroupCmd) -> Result<Report, CliError> {
    match c {
        GroupCmd::Describe { group } => {
            let g = ws.group(group)?;
            let gens: Vec<Value> = g.generators().iter().map(elem_json).collect();
            let v = json!({"group": group_json(g.spec()), "description": g.describe(), "generators": gens, "dim": g.dim()});
            Ok(Report::ok(v, g.describe()))
        }
        GroupCmd::Eval { group, word, r } => {
            let g = ws.group(group)?;
            let w = match parse_json(word, "word")? {
                Value::Array(xs) => xs.iter().map(elem_from).collect::<Result<Vec<_>, _>>()?,
                _ => return Err(CliError::usage("the word is a JSON list of elements")),
            };
            let w = w.iter().map(|e| g.canonical(e)).collect::<Result<Vec<_>, _>>()?;
            let x = g.eval_word(&w, *r);
            Ok(Report::ok(json!({"value": elem_json(&x), "r": r}), show(&g, &x)))
        }
        GroupCmd::Cosets { group, r } => {
            let g = ws.group(group)?;
            let cs = g.coset_system(*r);
            let reps: Vec<Value> = cs.reps.iter().map(elem_json).collect();
            let inv: Vec<Value> = cs.invariants.iter().map(int_json).collect();
            let text = format!("{} cosets: {}", cs.len(), cs.reps.iter().map(|e| show(&g, e)).collect::<Vec<_>>().join(" "));
            Ok(Report::ok(json!({"r": r, "index": cs.len(), "invariants": inv, "reps": reps}), text))
        }
    }
}

fn span_opt(ws: &Workspace, on: &SpanArgs) -> Result<Option<SpanningSet>, CliError> {
    match (&on.span, &on.group) {
        (Some(s), _) => Ok(Some(ws.span(s)?)),
        (None, Some(g)) => Ok(Some(ws.span(g)?)),
        (None, None) => Ok(None),
    }
}

fn span_req(ws: &Workspace, on: &SpanArgs) -> Result<SpanningSet, CliError> {
    match span_opt(ws, on)? {
        Some(s) => Ok(s),
        None if ws.bindings.contains_key("span") => ws.span("span"),
        None => Err(CliError::usage("no spanning set: pass --span or --group, or store one as \"span\" in the workspace")),
    }
}

fn span(ws: &mut Workspace, c: &SpanCmd) -> Result<Report, CliError> {
    let caps = ws.caps;
    match c {
        SpanCmd::Gate { group } => {
            let g = ws.group(group)?;
            Ok(match eigen_gate(&g) {
                GateVerdict::Admits { r_hint } => {
                    let v = json!({"verdict": "admits", "r_hint": r_hint});
                    let hint = r_hint.map(|r| format!("; F^{r} has all eigenvalues of modulus > 2")).unwrap_or_default();
                    Report::decision(true, v, format!("admits: all eigenvalues have modulus > 1{hint}"))
                }
                GateVerdict::Rejects(w) => {
                    let (kind, factor, text) = match &w {
                        EigenWitness::InsideUnitDisk { factor } => ("inside_unit_disk", factor, "rejects: eigenvalue modulus < 1"),
                        EigenWitness::OnUnitCircle { factor } => ("on_unit_circle", factor, "rejects: eigenvalue modulus = 1"),
                    };
                    let f: Vec<Value> = factor.iter().map(int_json).collect();
                    Report::decision(false, json!({"verdict": "rejects", "witness": kind, "factor": f}), text)
                }
            })
        }
        SpanCmd::Verify { group, digits, power, name } => {
            let g = ws.group(group)?;
            let ds = match parse_json(digits, "digit list")? {
                Value::Array(xs) => xs.iter().map(elem_from).collect::<Result<Vec<_>, _>>()?,
                _ => return Err(CliError::usage("digits are a JSON list")),
            };
            match fa_core::spanning::verify_spanning(&g, &ds, *power, &[], &caps)? {
                SpanCheck::Verified(s) => {
                    let v = json!({"verified": true, "span": span_json(&s)});
                    ws.store(name, Binding::Span(s.clone()))?;
                    Ok(Report::decision(true, v, format!("spanning set with {} digits, r = {}", s.len(), s.r())))
                }
                SpanCheck::Fails(f) => {
                    let v = json!({"verified": false, "axiom": f.axiom.name(), "witness": f.witness.iter().map(elem_json).collect::<Vec<_>>(), "detail": f.detail});
                    Ok(Report::decision(false, v, format!("fails axiom ({}): {}", f.axiom.name(), f.detail)))
                }
            }
        }
        SpanCmd::Search { group, max_r, radius, name } => {
            let g = ws.group(group)?;
            match search_spanning(&g, *max_r, *radius, &caps)? {
                Some(s) => {
                    let v = json!({"found": true, "span": span_json(&s)});
                    ws.store(name, Binding::Span(s.clone()))?;
                    Ok(Report::decision(true, v, format!("found {} digits with r = {}", s.len(), s.r())))
                }
                None => Ok(Report::decision(false, json!({"found": false}), "no spanning set within the search box")),
            }
        }
        SpanCmd::Lambda { elem, on } => {
            let s = span_req(ws, on)?;
            let e = parse_elem(elem)?;
            let lf = LengthFunction::new(&s, &caps);
            let l = lf.length(&e)?;
            let expansion: Vec<Value> = s.shortest_expansion(&s.group().canonical(&e)?, &caps)?.iter().map(|&i| elem_json(&s.digits()[i])).collect();
            let lam = lf.lambda(&e)?;
            let v = json!({"length": l, "lambda": lam.to_string(), "expansion": expansion});
            Ok(Report::ok(v, format!("length {l}, lambda {lam}")))
        }
    }
}

/// A raw automaton file over its own alphabet.
fn raw_language(path: &str) -> Result<(Dfa, Vec<Value>), CliError> {
    let (a, labels) = automaton_from(&read_json(std::path::Path::new(path))?)?;
    Ok((a.to_dfa(0)?.minimize(), labels))
}

fn label_word(labels: &[Value], w: &[Vec<u32>]) -> Vec<Value> {
    w.iter().map(|l| labels[l[0] as usize].clone()).collect()
}

fn lang(c: &LangCmd) -> Result<Report, CliError> {
    match c {
        LangCmd::Sparse { input } => {
            let (d, labels) = raw_language(input)?;
            Ok(match is_sparse(&d) {
                Sparsity::Sparse { degree } => Report::decision(true, json!({"sparse": true, "degree": degree}), format!("sparse, degree {degree}")),
                Sparsity::NotSparse { state, u, v, w, z } => {
                    let j = json!({"sparse": false, "state": state, "u": label_word(&labels, &u), "v": label_word(&labels, &v), "w": label_word(&labels, &w), "z": label_word(&labels, &z)});
                    Report::decision(false, j, format!("not sparse: two cycles through state {state}"))
                }
            })
        }
        LangCmd::Count { input, upto } => {
            let (d, _) = raw_language(input)?;
            let counts: Vec<String> = exact_counts(&d, *upto).iter().map(|c| c.to_string()).collect();
            Ok(Report::ok(json!({"counts": counts}), counts.join(" ")))
        }
        LangCmd::Parikh { input } => {
            let (d, labels) = raw_language(input)?;
            let s = parikh_image(&d)?;
            let sets: Vec<Value> = s.sets.iter().map(|l| json!({"base": l.base, "periods": l.periods})).collect();
            let text = s.sets.iter().map(|l| format!("{:?} + N{:?}", l.base, l.periods)).collect::<Vec<_>>().join("\n");
            Ok(Report::ok(json!({"letters": labels, "linear_sets": sets}), if text.is_empty() { "empty".into() } else { text }))
        }
    }
}

fn presburger(c: &PresburgerCmd, caps: Caps) -> Result<Report, CliError> {
    let PresburgerCmd::Decide { formula, sample } = c;
    let (vars, rel) = fa_core::presburger::decide(formula, caps)?;
    if vars.is_empty() {
        let t = rel.is_zero_arity_true();
        return Ok(Report::decision(t, json!({"free": vars, "value": t}), if t { "true" } else { "false" }));
    }
    let nonempty = !rel.is_empty();
    let tuples: Vec<Vec<u64>> = rel.enumerate(*sample)?.into_iter().take(64).collect();
    let v = json!({"free": vars, "satisfiable": nonempty, "states": rel.dfa().states(), "sample_bound": sample, "sample": tuples, "relation": rel_json(&rel)?});
    let text = if nonempty { format!("satisfiable in ({}); {} sample tuples", vars.join(", "), tuples.len()) } else { "unsatisfiable".into() };
    Ok(Report::decision(nonempty, v, text))
}

fn target(ws: &Workspace, t: &SetArgs) -> Result<AutomaticSet, CliError> {
    let span = span_opt(ws, &t.on)?;
    match (&t.set, &t.name, &t.expr) {
        (Some(s), None, None) | (None, Some(s), None) => ws.set(s, span.as_ref()),
        (None, None, Some(e)) => expr::eval(&expr::parse(e)?, ws, span.as_ref()),
        _ => Err(CliError::usage("give exactly one of --set, --name, --expr")),
    }
}

fn show_tuple(g: &Group, t: &[Element]) -> String {
    if t.len() == 1 {
        show(g, &t[0])
    } else {
        format!("({})", t.iter().map(|e| show(g, e)).collect::<Vec<_>>().join(", "))
    }
}

/// A word of set letters as digit labels.
fn word_labels(a: &AutomaticSet, w: &[Vec<u32>]) -> Vec<Value> {
    let ds = a.span().digits();
    w.iter().map(|l| tuple_json(&l.iter().map(|&i| ds[i as usize].clone()).collect::<Vec<_>>())).collect()
}

fn word_text(a: &AutomaticSet, w: &[Vec<u32>]) -> Vec<String> {
    let ds = a.span().digits();
    w.iter().map(|l| show_tuple(a.group(), &l.iter().map(|&i| ds[i as usize].clone()).collect::<Vec<_>>())).collect()
}

fn set(ws: &mut Workspace, c: &SetCmd) -> Result<Report, CliError> {
    match c {
        SetCmd::Build { expr: e, name, on } => {
            let span = span_opt(ws, on)?;
            let a = expr::eval(&expr::parse(e)?, ws, span.as_ref())?;
            let v = set_json(&a)?;
            if let Some(n) = name {
                ws.store(n, Binding::Set(a.clone()))?;
            }
            Ok(Report::ok(v, format!("set of arity {} with {} states", a.arity(), a.dfa().states())))
        }
        SetCmd::Member { target: t, elem } => {
            let a = target(ws, t)?;
            let x = tuple_from(&parse_json(elem, "element")?, a.arity())?;
            let m = a.member(&x)?;
            Ok(Report::decision(m, json!({"member": m}), if m { "member" } else { "not a member" }))
        }
        SetCmd::Enumerate { target: t, n } => {
            let a = target(ws, t)?;
            let mut xs = a.enumerate(*n)?;
            xs.sort();
            let text = xs.iter().map(|x| show_tuple(a.group(), x)).collect::<Vec<_>>().join("\n");
            Ok(Report::ok(json!({"n": n, "count": xs.len(), "elements": xs.iter().map(|x| tuple_json(x)).collect::<Vec<_>>()}), text))
        }
        SetCmd::Empty { target: t } => {
            let a = target(ws, t)?;
            let e = a.is_empty();
            Ok(Report::decision(e, json!({"empty": e}), if e { "empty" } else { "not empty" }))
        }
        SetCmd::Sparse { target: t } => {
            let a = target(ws, t)?;
            Ok(match is_f_sparse(&a)? {
                FSparsity::Sparse { degree, terms } => {
                    let js: Vec<Value> = terms
                        .iter()
                        .map(|t| json!({"v": t.v.iter().map(|w| word_labels(&a, w)).collect::<Vec<_>>(), "w": t.w.iter().map(|w| word_labels(&a, w)).collect::<Vec<_>>()}))
                        .collect();
                    let mut lines = vec![format!("F-sparse, degree {degree}; least representatives:")];
                    for t in &terms {
                        lines.push(format!("  {}", term_text(&a, &t.v, &t.w)));
                    }
                    Report::decision(true, json!({"sparse": true, "degree": degree, "terms": js}), lines.join("\n"))
                }
                FSparsity::NotSparse(Sparsity::NotSparse { state, u, v, w, z }) => {
                    let j = json!({"sparse": false, "state": state, "u": word_labels(&a, &u), "v": word_labels(&a, &v), "w": word_labels(&a, &w), "z": word_labels(&a, &z)});
                    let text = format!(
                        "not F-sparse: u v* z and u w* z with u = {}, v = {}, w = {}, z = {}",
                        join_word(&word_text(&a, &u)),
                        join_word(&word_text(&a, &v)),
                        join_word(&word_text(&a, &w)),
                        join_word(&word_text(&a, &z))
                    );
                    Report::decision(false, j, text)
                }
                FSparsity::NotSparse(Sparsity::Sparse { .. }) => unreachable!("a sparse witness is reported as sparse"),
            })
        }
        SetCmd::Kernel { target: t, r } => {
            let a = target(ws, t)?;
            let r = r.unwrap_or(a.span().r());
            let k = kernel_of(&a, &a.group().coset_system(r))?;
            let sizes: Vec<usize> = k.classes.iter().map(|c| c.dfa().states()).collect();
            let v = json!({
                "r": k.r,
                "reps": k.reps.iter().map(elem_json).collect::<Vec<_>>(),
                "letters": k.letters,
                "classes": k.len(),
                "table": k.table,
                "accepting": k.accepting,
                "sizes": sizes,
            });
            Ok(Report::ok(v, format!("{} kernel classes over {} cosets", k.len(), k.reps.len())))
        }
    }
}

fn join_word(w: &[String]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    if w.iter().all(|s| s.chars().count() == 1) {
        w.concat()
    } else {
        w.join(",")
    }
}

/// v₀ (w₁)* v₁ ⋯ in text.
fn term_text(a: &AutomaticSet, v: &[Vec<Vec<u32>>], w: &[Vec<Vec<u32>>]) -> String {
    let all: Vec<String> = v.iter().chain(w).flat_map(|x| word_text(a, x)).collect();
    let compact = all.iter().all(|s| s.chars().count() == 1);
    let mut parts = Vec::new();
    for (i, vi) in v.iter().enumerate() {
        if i > 0 {
            let s = join_word(&word_text(a, &w[i - 1]));
            parts.push(if w[i - 1].len() == 1 { format!("{s}*") } else { format!("({s})*") });
        }
        if !vi.is_empty() {
            parts.push(join_word(&word_text(a, vi)));
        }
    }
    if parts.is_empty() {
        return "ε".into();
    }
    parts.join(if compact { "" } else { " " })
}

fn mt(ws: &mut Workspace, c: &MtCmd) -> Result<Report, CliError> {
    let caps = ws.caps;
    match c {
        MtCmd::Ladder { target: t, n, mode, bound } => {
            let a = target(ws, t)?;
            let mode = match mode {
                Mode::Exact => LadderMode::Exact,
                Mode::Bounded => LadderMode::Bounded(bound.unwrap_or(caps.ladder_bound)),
            };
            let g = a.group().clone();
            Ok(match ladder_search(&a, *n, mode)? {
                LadderOutcome::Found(l) => {
                    let v = json!({"outcome": "found", "n": n, "a": l.a.iter().map(|x| tuple_json(x)).collect::<Vec<_>>(), "b": l.b.iter().map(|x| tuple_json(x)).collect::<Vec<_>>()});
                    let mut lines = vec![format!("ladder of size {n}:")];
                    for (x, y) in l.a.iter().zip(&l.b) {
                        lines.push(format!("  a = {}  b = {}", show_tuple(&g, x), show_tuple(&g, y)));
                    }
                    Report::decision(true, v, lines.join("\n"))
                }
                LadderOutcome::NoneWithin(b) => {
                    Report::decision(false, json!({"outcome": "none_within", "n": n, "bound": b}), format!("no ladder of size {n} with lambda <= 2^{b}"))
                }
                LadderOutcome::NoLadder => Report::decision(false, json!({"outcome": "no_ladder", "n": n}), format!("no ladder of size {n} exists")),
            })
        }
        MtCmd::Edp(e) => edp(ws, e),
    }
}

fn edp(ws: &mut Workspace, c: &EdpCmd) -> Result<Report, CliError> {
    let caps = ws.caps;
    match c {
        EdpCmd::Member { edp, elem } => {
            let e = ws.edp(edp)?;
            let m = e.member(&parse_elem(elem)?, &caps)?;
            Ok(Report::decision(m, json!({"member": m}), if m { "member" } else { "not a member" }))
        }
        EdpCmd::NormalForm { edp, name } => {
            let e = ws.edp(edp)?.normal_form(&caps)?;
            let v = edp_json(&e)?;
            if let Some(n) = name {
                ws.store(n, Binding::Edp(e.clone()))?;
            }
            Ok(Report::ok(v, format!("{} single-letter words", e.words().len())))
        }
        EdpCmd::FromSparse { target: t, store } => {
            let a = target(ws, t)?;
            let e = EdpSet::from_sparse(&a)?;
            let v = edp_json(&e)?;
            if let Some(n) = store {
                ws.store(n, Binding::Edp(e.clone()))?;
            }
            Ok(Report::ok(v, format!("EDP set with {} words", e.words().len())))
        }
        EdpCmd::Values { edp, bound } => {
            let e = ws.edp(edp)?;
            let xs = e.values_within(*bound)?;
            let text = xs.iter().map(|x| show(e.group(), x)).collect::<Vec<_>>().join("\n");
            Ok(Report::ok(json!({"bound": bound, "elements": xs.iter().map(elem_json).collect::<Vec<_>>()}), text))
        }
    }
}

fn reading_json(r: &Reading) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "found": c.found, "expected": c.expected, "counterexamples": c.counterexamples}))
        .collect();
    json!({"name": r.name, "coefficient": r.coefficient, "passed": r.passed(), "checks": checks})
}

fn demo(c: &DemoCmd, caps: Caps) -> Result<Report, CliError> {
    let DemoCmd::Polysnip { p, dmax } = c;
    let rep = polysnip_demo(*p, *dmax, caps)?;
    let chosen = rep.chosen().map(|r| r.name);
    let v = json!({"p": rep.p, "dmax": rep.dmax, "chosen": chosen, "readings": rep.readings.iter().map(reading_json).collect::<Vec<_>>()});
    let mut lines = Vec::new();
    for r in &rep.readings {
        lines.push(format!("reading \"{}\" (c = {}): {}", r.name, r.coefficient, if r.passed() { "pass" } else { "fail" }));
        for ch in &r.checks {
            lines.push(format!("  [{}] {}: {}/{}", if ch.passed { "pass" } else { "FAIL" }, ch.name, ch.found, ch.expected));
        }
    }
    lines.push(match chosen {
        Some(n) => format!("all checks hold under reading \"{n}\" for p = {p}, degree <= {dmax}"),
        None => "no reading passes every check".into(),
    });
    Ok(Report::decision(chosen.is_some(), v, lines.join("\n")))
}
