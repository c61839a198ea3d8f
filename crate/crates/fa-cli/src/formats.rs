//! JSON file formats. Integers are JSON numbers when they fit in an i64
//! and decimal strings otherwise. Automaton letters are labelled: by a
//! digit (or a tuple of digits) for sets, by a bit tuple for Presburger
//! relations.

use std::str::FromStr;

use fa_core::automata::{Automaton, Dfa, Tracks};
use fa_core::fauto::AutomaticSet;
use fa_core::modeltheory::EdpSet;
use fa_core::presburger::{rel_tracks, PresburgerRel};
use fa_core::spanning::{verify_spanning, SpanCheck, SpanningSet};
use fa_core::{Caps, Element, Group, GroupSpec};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::CliError;

pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn int_from(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| CliError::usage(format!("not an integer: {n}"))),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| CliError::usage(format!("not an integer: {s:?}"))),
        _ => Err(CliError::usage(format!("expected an integer, found {v}"))),
    }
}

fn small(v: &Value, what: &str) -> Result<u32, CliError> {
    v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| CliError::usage(format!("{what} must be a small nonnegative integer")))
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::usage(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::usage(format!("{what} must be an array")))
}

pub fn elem_json(e: &Element) -> Value {
    Value::Array(e.0.iter().map(int_json).collect())
}

pub fn tuple_json(t: &[Element]) -> Value {
    if t.len() == 1 {
        elem_json(&t[0])
    } else {
        Value::Array(t.iter().map(elem_json).collect())
    }
}

/// An element: an integer array, or a bare integer for [n].
pub fn elem_from(v: &Value) -> Result<Element, CliError> {
    match v {
        Value::Array(xs) => Ok(Element(xs.iter().map(int_from).collect::<Result<_, _>>()?)),
        _ => Ok(Element(vec![int_from(v)?])),
    }
}

/// A tuple of `m` elements; for m = 1 the element itself.
pub fn tuple_from(v: &Value, m: usize) -> Result<Vec<Element>, CliError> {
    if m == 1 {
        return Ok(vec![elem_from(v)?]);
    }
    let xs = array(v, "tuple")?;
    if xs.len() != m {
        return Err(CliError::usage(format!("expected a tuple of {m} elements, found {v}")));
    }
    xs.iter().map(elem_from).collect()
}

pub fn parse_json(text: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(text.trim()).map_err(|e| CliError::usage(format!("bad {what} {text:?}: {e}")))
}

fn matrix_json(m: &[Vec<BigInt>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

fn matrix_from(v: &Value) -> Result<Vec<Vec<BigInt>>, CliError> {
    array(v, "matrix")?.iter().map(|r| array(r, "matrix row")?.iter().map(int_from).collect()).collect()
}

pub fn group_json(g: &GroupSpec) -> Value {
    match g {
        GroupSpec::FreeLattice { endo } => json!({"variant": "FreeLattice", "rank": endo.len(), "endo": matrix_json(endo)}),
        GroupSpec::IntegerBase { d } => json!({"variant": "IntegerBase", "d": int_json(d)}),
        GroupSpec::PolyRing { p } => json!({"variant": "PolyRing", "p": p}),
        GroupSpec::LatticeWithTorsion { rank, torsion, endo } => json!({
            "variant": "LatticeWithTorsion",
            "rank": rank,
            "torsion": Value::Array(torsion.iter().map(int_json).collect()),
            "endo": matrix_json(endo),
        }),
    }
}

pub fn group_from(v: &Value) -> Result<Group, CliError> {
    let variant = field(v, "variant")?.as_str().ok_or_else(|| CliError::usage("variant must be a string"))?;
    let spec = match variant {
        "FreeLattice" => {
            let endo = matrix_from(field(v, "endo")?)?;
            if let Some(r) = v.get("rank") {
                if small(r, "rank")? as usize != endo.len() {
                    return Err(CliError::usage("rank does not match the matrix size"));
                }
            }
            GroupSpec::FreeLattice { endo }
        }
        "IntegerBase" => GroupSpec::IntegerBase { d: int_from(field(v, "d")?)? },
        "PolyRing" => GroupSpec::PolyRing { p: small(field(v, "p")?, "p")? },
        "LatticeWithTorsion" => GroupSpec::LatticeWithTorsion {
            rank: small(field(v, "rank")?, "rank")? as usize,
            torsion: array(field(v, "torsion")?, "torsion")?.iter().map(int_from).collect::<Result<_, _>>()?,
            endo: matrix_from(field(v, "endo")?)?,
        },
        other => return Err(CliError::usage(format!("unknown group variant {other:?}"))),
    };
    Ok(Group::new(spec)?)
}

pub fn span_json(s: &SpanningSet) -> Value {
    json!({
        "group": group_json(s.group().spec()),
        "r": s.r(),
        "digits": Value::Array(s.digits().iter().map(elem_json).collect()),
    })
}

/// A spanning set, re-verified on load. `group` is used when the file
/// does not name one.
pub fn span_from(v: &Value, group: Option<&Group>, caps: &Caps) -> Result<SpanningSet, CliError> {
    let g = match (v.get("group"), group) {
        (Some(gv), _) => group_from(gv)?,
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(CliError::usage("spanning set without a group")),
    };
    let r = small(field(v, "r")?, "r")?;
    let digits: Vec<Element> = array(field(v, "digits")?, "digits")?.iter().map(elem_from).collect::<Result<_, _>>()?;
    verified(&g, &digits, r, caps)
}

pub fn verified(g: &Group, digits: &[Element], r: u32, caps: &Caps) -> Result<SpanningSet, CliError> {
    match verify_spanning(g, digits, r, &[], caps)? {
        SpanCheck::Verified(s) => Ok(s),
        SpanCheck::Fails(f) => Err(CliError::usage(format!("not a spanning set, axiom ({}) fails: {}", f.axiom.name(), f.detail))),
    }
}

pub fn automaton_json(a: &Automaton, alphabet: Vec<Value>) -> Value {
    json!({
        "alphabet": alphabet,
        "states": a.states,
        "initial": a.initial,
        "finish": a.finish,
        "edges": a.edges.iter().map(|&(p, l, q)| json!([p, l, q])).collect::<Vec<_>>(),
        "deterministic": a.deterministic,
    })
}

/// The automaton and its letter labels.
pub fn automaton_from(v: &Value) -> Result<(Automaton, Vec<Value>), CliError> {
    let labels = array(field(v, "alphabet")?, "alphabet")?.clone();
    let finish = array(field(v, "finish")?, "finish")?.iter().map(|x| small(x, "final state")).collect::<Result<_, _>>()?;
    let mut edges = Vec::new();
    for e in array(field(v, "edges")?, "edges")? {
        let t = array(e, "edge")?;
        if t.len() != 3 {
            return Err(CliError::usage("an edge is [from, letter, to]"));
        }
        edges.push((small(&t[0], "edge")?, small(&t[1], "edge")?, small(&t[2], "edge")?));
    }
    let a = Automaton {
        alphabet: labels.len() as u32,
        states: small(field(v, "states")?, "states")?,
        initial: small(field(v, "initial")?, "initial")?,
        finish,
        edges,
        deterministic: v.get("deterministic").and_then(Value::as_bool).unwrap_or(false),
    };
    a.validate()?;
    Ok((a, labels))
}

/// A DFA over `tracks` reading letter `letters[i]` wherever `a` reads
/// letter i. Letters no label names lead to a dead state.
pub fn dfa_on_tracks(a: &Automaton, letters: &[Vec<u32>], tracks: Tracks) -> Result<Dfa, CliError> {
    let size = tracks.alphabet_size().filter(|&s| s <= 1 << 24).ok_or_else(|| CliError::usage("alphabet too large"))?;
    let mut table = vec![None; size as usize];
    for (i, l) in letters.iter().enumerate() {
        if l.len() != tracks.len() || l.iter().zip(tracks.radix()).any(|(x, r)| x >= r) {
            return Err(CliError::usage(format!("letter {i} does not fit the tracks")));
        }
        let k = tracks.letter_index(l) as usize;
        if table[k].is_some() {
            return Err(CliError::usage(format!("letter {i} is labelled twice")));
        }
        table[k] = Some(i as u32);
    }
    let pad = table[tracks.letter_index(&tracks.pad_letter()) as usize].unwrap_or(0);
    let d = a.to_dfa(pad)?;
    let n = d.states() as u32;
    let mut finish = d.finish().to_vec();
    finish.push(false);
    let t2 = tracks.clone();
    Ok(Dfa::from_fn(tracks, n as usize + 1, d.initial(), finish, move |q, l| match table[t2.letter_index(l) as usize] {
        Some(i) if q < n => d.step(q, &[i]),
        _ => n,
    })
    .minimize())
}

/// Explicit automaton of a DFA with letters in `Tracks::letter_index`
/// order, each labelled by `label`.
fn dfa_json(d: &Dfa, label: impl Fn(&[u32]) -> Value) -> Result<Value, CliError> {
    let a = Automaton::from_dfa(d)?;
    let t = d.tracks();
    let alphabet = (0..a.alphabet as u64).map(|i| label(&t.letter_of(i))).collect();
    Ok(automaton_json(&a, alphabet))
}

pub fn set_json(a: &AutomaticSet) -> Result<Value, CliError> {
    let digits = a.span().digits();
    let auto = dfa_json(a.dfa(), |l| {
        let t: Vec<Element> = l.iter().map(|&i| digits[i as usize].clone()).collect();
        tuple_json(&t)
    })?;
    Ok(json!({"span": span_json(a.span()), "arity": a.arity(), "automaton": auto}))
}

/// An automatic set from a set file, or from a bare automaton file whose
/// letters are labelled by digits (tuples of digits when arity > 1). The
/// words are read with F^s, s defaulting to the exponent of the spanning
/// set.
pub fn set_from(v: &Value, span: Option<&SpanningSet>, caps: &Caps) -> Result<AutomaticSet, CliError> {
    let span = match (v.get("span"), span) {
        (Some(sv), _) => span_from(sv, None, caps)?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Err(CliError::usage("set without a spanning set")),
    };
    let m = v.get("arity").map(|x| small(x, "arity")).transpose()?.unwrap_or(1) as usize;
    let s = v.get("s").map(|x| small(x, "s")).transpose()?.unwrap_or(span.r());
    let auto_v = v.get("automaton").unwrap_or(v);
    let (auto, labels) = automaton_from(auto_v)?;
    let g = span.group();
    let tuples: Vec<Vec<Element>> = labels
        .iter()
        .map(|l| tuple_from(l, m)?.iter().map(|e| Ok(g.canonical(e)?)).collect::<Result<Vec<_>, CliError>>())
        .collect::<Result<_, _>>()?;
    let mut digits: Vec<Element> = tuples.iter().flatten().cloned().collect();
    digits.push(g.zero());
    digits.sort();
    digits.dedup();
    let zero = digits.iter().position(|d| g.is_zero(d)).expect("zero listed") as u32;
    let letters: Vec<Vec<u32>> =
        tuples.iter().map(|t| t.iter().map(|e| digits.binary_search(e).expect("listed") as u32).collect()).collect();
    let d = dfa_on_tracks(&auto, &letters, Tracks::uniform(m, digits.len() as u32, zero))?;
    if digits == span.digits() && s == span.r() {
        Ok(AutomaticSet::from_language(&span, m, &d, *caps)?)
    } else {
        Ok(AutomaticSet::from_digits(&span, m, &digits, s, &d, *caps)?)
    }
}

pub fn rel_json(r: &PresburgerRel) -> Result<Value, CliError> {
    let auto = dfa_json(r.dfa(), |l| json!(l))?;
    Ok(json!({"arity": r.arity(), "automaton": auto}))
}

/// A Presburger relation: an automaton over bit tuples (least significant
/// bit first), or a formula whose free variables in sorted order are the
/// coordinates.
pub fn rel_from(v: &Value, caps: &Caps) -> Result<PresburgerRel, CliError> {
    if let Some(f) = v.get("formula") {
        let text = f.as_str().ok_or_else(|| CliError::usage("formula must be a string"))?;
        return Ok(fa_core::presburger::decide(text, *caps)?.1);
    }
    let k = small(field(v, "arity")?, "arity")? as usize;
    let (auto, labels) = automaton_from(field(v, "automaton")?)?;
    let letters: Vec<Vec<u32>> = labels
        .iter()
        .map(|l| match l {
            Value::Array(bits) => bits.iter().map(|b| small(b, "bit")).collect(),
            _ => Ok(vec![small(l, "bit")?]),
        })
        .collect::<Result<_, _>>()?;
    Ok(PresburgerRel::from_dfa(dfa_on_tracks(&auto, &letters, rel_tracks(k))?)?)
}

pub fn edp_json(e: &EdpSet) -> Result<Value, CliError> {
    let words: Vec<Value> = e.words().iter().map(|w| Value::Array(w.iter().map(elem_json).collect())).collect();
    Ok(json!({"group": group_json(e.group().spec()), "r": e.r(), "words": words, "phi": rel_json(e.phi())?}))
}

/// An EDP set. `phi` is a formula in x1..xn (one variable per word) or a
/// relation object.
pub fn edp_from(v: &Value, caps: &Caps) -> Result<EdpSet, CliError> {
    let g = group_from(field(v, "group")?)?;
    let r = v.get("r").map(|x| small(x, "r")).transpose()?.unwrap_or(1);
    let words: Vec<Vec<Element>> = array(field(v, "words")?, "words")?
        .iter()
        .map(|w| array(w, "word")?.iter().map(elem_from).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    match field(v, "phi")? {
        Value::String(text) => Ok(EdpSet::from_formula(&g, r, words, text, *caps)?),
        phi => Ok(EdpSet::new(&g, r, words, rel_from(phi, caps)?)?),
    }
}
