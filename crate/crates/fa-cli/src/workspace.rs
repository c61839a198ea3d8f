//! Named bindings, the files and built-in objects they resolve to, and the
//! workspace manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fa_core::fauto::{f_cycle, f_powers, order_set, AutomaticSet};
use fa_core::modeltheory::EdpSet;
use fa_core::presburger::PresburgerRel;
use fa_core::spanning::{search_spanning, SpanningSet};
use fa_core::{Caps, Element, Group, GroupSpec};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::formats::*;
use crate::CliError;

#[derive(Clone, Debug)]
pub enum Binding {
    Group(Group),
    Span(SpanningSet),
    Set(AutomaticSet),
    Edp(EdpSet),
    Rel(PresburgerRel),
}

impl Binding {
    pub fn kind(&self) -> &'static str {
        match self {
            Binding::Group(_) => "group",
            Binding::Span(_) => "span",
            Binding::Set(_) => "set",
            Binding::Edp(_) => "edp",
            Binding::Rel(_) => "presburger",
        }
    }

    pub fn to_json(&self) -> Result<Value, CliError> {
        let mut v = match self {
            Binding::Group(g) => group_json(g.spec()),
            Binding::Span(s) => span_json(s),
            Binding::Set(a) => set_json(a)?,
            Binding::Edp(e) => edp_json(e)?,
            Binding::Rel(r) => rel_json(r)?,
        };
        v.as_object_mut().expect("object").insert("type".into(), json!(self.kind()));
        Ok(v)
    }

    /// Reads a binding; without a "type" field the shape of the object
    /// decides.
    pub fn from_json(v: &Value, caps: &Caps) -> Result<Binding, CliError> {
        let kind = match v.get("type").and_then(Value::as_str) {
            Some(k) => k,
            None if v.get("variant").is_some() => "group",
            None if v.get("words").is_some() => "edp",
            None if v.get("digits").is_some() && v.get("automaton").is_none() => "span",
            None if v.get("span").is_some() => "set",
            None if v.get("formula").is_some() || v.get("automaton").is_some() => "presburger",
            None => return Err(CliError::usage("cannot tell what kind of object this file holds")),
        };
        Ok(match kind {
            "group" => Binding::Group(group_from(v)?),
            "span" => Binding::Span(span_from(v, None, caps)?),
            "set" => Binding::Set(set_from(v, None, caps)?),
            "edp" => Binding::Edp(edp_from(v, caps)?),
            "presburger" => Binding::Rel(rel_from(v, caps)?),
            k => return Err(CliError::usage(format!("unknown binding type {k:?}"))),
        })
    }
}

/// Names that resolve without a workspace.
pub const BUILTINS: &[(&str, &str)] = &[
    ("F7", "group F_7[t] with F = multiplication by t"),
    ("Z4", "group Z with F = multiplication by 4"),
    ("fib", "group Z^2 with F = [[1,1],[1,0]]"),
    ("tN", "t^N in F_7[t]"),
    ("tN2", "t^N together with 2t^N in F_7[t]"),
    ("cycle1", "C(1;F) = {1 + t + ... + t^n} in F_7[t]"),
    ("order", "{(t^i, t^j) : i <= j} in F_7[t]^2"),
    ("F7all", "all of F_7[t]"),
    ("Z4all", "all of Z"),
];

fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// The usual spanning set: all constants for 𝔽_p[t], the balanced digits
/// for d > 0 on ℤ, otherwise the first one a box search finds.
pub fn default_span(g: &Group, caps: &Caps) -> Result<SpanningSet, CliError> {
    let digits: Option<Vec<Element>> = match g.spec() {
        GroupSpec::PolyRing { p } => Some((0..*p as i64).map(|c| Element::from_i64s(&[c])).collect()),
        GroupSpec::IntegerBase { d } if *d > BigInt::from(2) && *d <= BigInt::from(1 << 16) => {
            let h: i64 = (d / 2u32).try_into().expect("small base");
            Some((-h..=h).map(|c| Element::from_i64s(&[c])).collect())
        }
        _ => None,
    };
    if let Some(ds) = digits {
        let ds: Vec<Element> = ds.iter().map(|e| g.canonical(e)).collect::<Result<_, _>>()?;
        return verified(g, &ds, 1, caps);
    }
    search_spanning(g, 4, 3, caps)?.ok_or_else(|| CliError::usage("no spanning set found for this group; give one with --span"))
}

pub fn builtin(name: &str, caps: &Caps) -> Result<Option<Binding>, CliError> {
    let f7 = || Group::new(GroupSpec::PolyRing { p: 7 });
    let f7span = || -> Result<SpanningSet, CliError> { default_span(&f7()?, caps) };
    let one = Element::from_i64s(&[1]);
    let two = Element::from_i64s(&[2]);
    Ok(Some(match name {
        "F7" => Binding::Group(f7()?),
        "Z4" => Binding::Group(Group::new(GroupSpec::IntegerBase { d: BigInt::from(4) })?),
        "fib" => Binding::Group(Group::new(GroupSpec::FreeLattice { endo: int_matrix(&[&[1, 1], &[1, 0]]) })?),
        "tN" => Binding::Set(f_powers(&f7span()?, &one, *caps)?),
        "tN2" => {
            let s = f7span()?;
            Binding::Set(f_powers(&s, &one, *caps)?.union(&f_powers(&s, &two, *caps)?)?)
        }
        "cycle1" => Binding::Set(f_cycle(&f7span()?, &one, 1, *caps)?),
        "order" => Binding::Set(order_set(&f7span()?, &one, *caps)?),
        "F7all" => Binding::Set(AutomaticSet::whole(&f7span()?, 1, *caps)),
        "Z4all" => {
            let g = Group::new(GroupSpec::IntegerBase { d: BigInt::from(4) })?;
            Binding::Set(AutomaticSet::whole(&default_span(&g, caps)?, 1, *caps))
        }
        _ => return Ok(None),
    }))
}

pub struct Workspace {
    path: Option<PathBuf>,
    pub bindings: BTreeMap<String, Binding>,
    pub caps: Caps,
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

impl Workspace {
    pub fn open(path: Option<PathBuf>, caps: Caps) -> Result<Workspace, CliError> {
        let mut bindings = BTreeMap::new();
        if let Some(p) = path.as_ref().filter(|p| p.exists()) {
            let v = read_json(p)?;
            let map = v.get("bindings").and_then(Value::as_object).ok_or_else(|| CliError::usage("workspace lacks a bindings object"))?;
            for (name, b) in map {
                let b = Binding::from_json(b, &caps).map_err(|e| CliError::usage(format!("binding {name:?}: {e}")))?;
                bindings.insert(name.clone(), b);
            }
        }
        Ok(Workspace { path, bindings, caps })
    }

    /// Stores a binding and rewrites the manifest. Without a workspace the
    /// binding only lives for this command.
    pub fn store(&mut self, name: &str, b: Binding) -> Result<(), CliError> {
        if name.is_empty() || name.contains(|c: char| !(c.is_alphanumeric() || c == '_')) {
            return Err(CliError::usage(format!("binding names are alphanumeric, not {name:?}")));
        }
        self.bindings.insert(name.to_string(), b);
        let Some(path) = &self.path else { return Ok(()) };
        let mut map = serde_json::Map::new();
        for (n, b) in &self.bindings {
            map.insert(n.clone(), b.to_json()?);
        }
        let text = serde_json::to_string_pretty(&json!({"bindings": map})).expect("serializable");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    /// A workspace name, then a file, then a built-in.
    pub fn resolve(&self, r: &str) -> Result<Binding, CliError> {
        if let Some(b) = self.bindings.get(r) {
            return Ok(b.clone());
        }
        let p = Path::new(r);
        if p.is_file() {
            return Binding::from_json(&read_json(p)?, &self.caps);
        }
        builtin(r, &self.caps)?.ok_or_else(|| CliError::usage(format!("{r:?} is neither a binding, a file nor a built-in")))
    }

    pub fn group(&self, r: &str) -> Result<Group, CliError> {
        match self.resolve(r)? {
            Binding::Group(g) => Ok(g),
            Binding::Span(s) => Ok(s.group().clone()),
            Binding::Set(a) => Ok(a.group().clone()),
            Binding::Edp(e) => Ok(e.group().clone()),
            b => Err(CliError::usage(format!("{r:?} is a {}, not a group", b.kind()))),
        }
    }

    pub fn span(&self, r: &str) -> Result<SpanningSet, CliError> {
        match self.resolve(r)? {
            Binding::Group(g) => default_span(&g, &self.caps),
            Binding::Span(s) => Ok(s),
            Binding::Set(a) => Ok(a.span().clone()),
            b => Err(CliError::usage(format!("{r:?} is a {}, not a spanning set", b.kind()))),
        }
    }

    /// A set; a bare automaton file needs `span`.
    pub fn set(&self, r: &str, span: Option<&SpanningSet>) -> Result<AutomaticSet, CliError> {
        if !self.bindings.contains_key(r) && Path::new(r).is_file() {
            let v = read_json(Path::new(r))?;
            if v.get("type").is_none() && v.get("span").is_none() {
                return set_from(&v, span, &self.caps);
            }
        }
        match self.resolve(r)? {
            Binding::Set(a) => Ok(a),
            b => Err(CliError::usage(format!("{r:?} is a {}, not a set", b.kind()))),
        }
    }

    pub fn edp(&self, r: &str) -> Result<EdpSet, CliError> {
        match self.resolve(r)? {
            Binding::Edp(e) => Ok(e),
            b => Err(CliError::usage(format!("{r:?} is a {}, not an EDP set", b.kind()))),
        }
    }
}
