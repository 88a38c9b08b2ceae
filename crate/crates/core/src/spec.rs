//! Category spec files and built-in presets.
//!
//! A spec is JSON with a `backend` block, an optional `serre` list of simple
//! labels and optional named `objects`. Matrix entries are integers or
//! strings such as `"-3"` or `"5/7"`; floats are rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::abcat::{direct_sum_all, Backend, Obj};
use crate::error::Error;
use crate::exactlin::Mat;
use crate::field::{parse_elem, Field};
use crate::serre::SerreSpec;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("unresolved simple label `{0}`")]
    UnresolvedLabel(String),
    #[error("backend has no simples (empty block list)")]
    EmptyBackend,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error(transparent)]
    Core(#[from] Error),
}

pub type SpecResult<T> = std::result::Result<T, SpecError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub backend: BackendDef,
    #[serde(default)]
    pub serre: Option<Vec<String>>,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectDef>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendDef {
    pub preset: Option<String>,
    pub kind: Option<String>,
    pub field: Option<String>,
    pub vertices: Option<usize>,
    /// 1-based `[source, target]` pairs.
    pub arrows: Option<Vec<(usize, usize)>>,
    pub orders: Option<Vec<u64>>,
    pub labels: Option<Vec<String>>,
    pub blocks: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectDef {
    pub dims: Option<Vec<usize>>,
    pub actions: Option<Vec<Vec<Vec<Scalar>>>>,
    pub grid: Option<Vec<Vec<Vec<usize>>>>,
    pub simple: Option<String>,
    pub sum: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

/// A resolved spec: backend, Serre subcategory and named objects.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub backend: Backend,
    pub serre: SerreSpec,
    pub objects: BTreeMap<String, Obj>,
}

impl Loaded {
    /// A named object, falling back to the simple with that label.
    pub fn object(&self, name: &str) -> SpecResult<Obj> {
        if let Some(x) = self.objects.get(name) {
            return Ok(x.clone());
        }
        self.backend
            .simple_index(name)
            .map(|s| self.backend.simple(s))
            .map_err(|_| SpecError::UnknownObject(name.to_string()))
    }

    /// Replaces C by the Serre subcategory on `labels`.
    pub fn with_serre<S: AsRef<str>>(mut self, labels: &[S]) -> SpecResult<Loaded> {
        self.serre = serre_from(&self.backend, labels)?;
        Ok(self)
    }
}

fn serre_from<S: AsRef<str>>(b: &Backend, labels: &[S]) -> SpecResult<SerreSpec> {
    let idx = labels
        .iter()
        .map(|l| {
            b.simple_index(l.as_ref())
                .map_err(|_| SpecError::UnresolvedLabel(l.as_ref().to_string()))
        })
        .collect::<SpecResult<BTreeSet<usize>>>()?;
    Ok(SerreSpec::new(b, idx)?)
}

/// Names accepted by [`preset`] and by the CLI in place of a spec file.
pub const PRESET_NAMES: &[&str] = &["repz2", "repz3", "pathA2", "pathA3", "matvec:<n1,n2,...>", "group:<m1,m2,...>"];

/// A built-in spec by name. `field` overrides the preset's default field.
pub fn preset(name: &str, field: Option<Field>) -> SpecResult<Loaded> {
    let mut objects = BTreeMap::new();
    let backend = match name {
        "repz2" => {
            let f = field.unwrap_or(Field::Rational);
            let b = Backend::group_algebra(f, vec![2], Some(vec!["W2".into(), "W1".into()]))?;
            let swap = Mat::from_ints(f, &[&[0, 1], &[1, 0]]);
            objects.insert("regular".into(), Obj::new(&b, vec![2], vec![swap])?);
            b
        }
        "repz3" => {
            let f = field.unwrap_or(Field::Prime(7));
            let b = Backend::group_algebra(f, vec![3], None)?;
            let cycle = Mat::from_ints(f, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
            objects.insert("regular".into(), Obj::new(&b, vec![3], vec![cycle])?);
            b
        }
        "pathA2" => {
            let f = field.unwrap_or(Field::Prime(2));
            let b = Backend::path_a2(f);
            objects.insert("M12".into(), Obj::new(&b, vec![1, 1], vec![Mat::identity(f, 1)])?);
            b
        }
        "pathA3" => {
            let f = field.unwrap_or(Field::Prime(2));
            let b = Backend::path_algebra(f, 3, vec![(0, 1), (1, 2)])?;
            let one = Mat::identity(f, 1);
            let zero = Mat::zeros(f, 0, 1);
            objects.insert("M12".into(), Obj::new(&b, vec![1, 1, 0], vec![one.clone(), zero.clone()])?);
            objects.insert("M23".into(), Obj::new(&b, vec![0, 1, 1], vec![zero.transpose(), one.clone()])?);
            objects.insert("M123".into(), Obj::new(&b, vec![1, 1, 1], vec![one.clone(), one])?);
            b
        }
        _ => {
            if let Some(list) = name.strip_prefix("matvec:") {
                let blocks = parse_list::<usize>(list, name)?;
                if blocks.is_empty() {
                    return Err(SpecError::EmptyBackend);
                }
                Backend::matvec(field.unwrap_or(Field::Rational), blocks)?
            } else if let Some(list) = name.strip_prefix("group:") {
                let orders = parse_list::<u64>(list, name)?;
                let f = field.ok_or_else(|| SpecError::Invalid(format!("preset `{name}` needs a field")))?;
                Backend::group_algebra(f, orders, None)?
            } else {
                return Err(SpecError::Invalid(format!(
                    "unknown preset `{name}` (known: {})",
                    PRESET_NAMES.join(", ")
                )));
            }
        }
    };
    Ok(Loaded {
        serre: SerreSpec::zero(&backend),
        backend,
        objects,
    })
}

fn parse_list<T: std::str::FromStr>(list: &str, name: &str) -> SpecResult<Vec<T>> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| SpecError::Invalid(format!("bad number `{s}` in preset `{name}`")))
        })
        .collect()
}

fn parse_field(s: &str) -> SpecResult<Field> {
    s.parse().map_err(SpecError::Invalid)
}

impl SpecFile {
    pub fn parse(text: &str) -> SpecResult<SpecFile> {
        serde_json::from_str(text).map_err(|e| SpecError::Syntax {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })
    }

    pub fn resolve(&self) -> SpecResult<Loaded> {
        let field = self.backend.field.as_deref().map(parse_field).transpose()?;
        let mut loaded = match (&self.backend.preset, self.backend.kind.as_deref()) {
            (Some(p), None) => {
                let d = &self.backend;
                if d.vertices.is_some() || d.arrows.is_some() || d.orders.is_some() || d.blocks.is_some() {
                    return Err(SpecError::Invalid("a preset backend takes only `field`".into()));
                }
                preset(p, field)?
            }
            (Some(_), Some(_)) => return Err(SpecError::Invalid("give either `preset` or `kind`, not both".into())),
            (None, Some(kind)) => {
                let field = field.ok_or_else(|| SpecError::Invalid("backend needs a `field`".into()))?;
                let backend = self.explicit_backend(kind, field)?;
                Loaded {
                    serre: SerreSpec::zero(&backend),
                    backend,
                    objects: BTreeMap::new(),
                }
            }
            (None, None) => return Err(SpecError::Invalid("backend needs `preset` or `kind`".into())),
        };
        if let Some(labels) = &self.serre {
            loaded.serre = serre_from(&loaded.backend, labels)?;
        }
        let mut resolving = BTreeSet::new();
        for name in self.objects.keys() {
            let x = self.build_object(&loaded, name, &mut resolving)?;
            loaded.objects.insert(name.clone(), x);
        }
        Ok(loaded)
    }

    fn explicit_backend(&self, kind: &str, field: Field) -> SpecResult<Backend> {
        let d = &self.backend;
        let unexpected = |key: &str, present: bool| {
            if present {
                Err(SpecError::Invalid(format!("`{key}` does not apply to kind `{kind}`")))
            } else {
                Ok(())
            }
        };
        match kind {
            "path" => {
                unexpected("orders", d.orders.is_some())?;
                unexpected("blocks", d.blocks.is_some())?;
                unexpected("labels", d.labels.is_some())?;
                let n = d.vertices.ok_or_else(|| SpecError::Invalid("path backend needs `vertices`".into()))?;
                let arrows = d
                    .arrows
                    .clone()
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(s, t)| {
                        if s == 0 || t == 0 {
                            Err(SpecError::Invalid("arrow endpoints are 1-based".into()))
                        } else {
                            Ok((s - 1, t - 1))
                        }
                    })
                    .collect::<SpecResult<Vec<_>>>()?;
                Ok(Backend::path_algebra(field, n, arrows)?)
            }
            "group" => {
                unexpected("vertices", d.vertices.is_some())?;
                unexpected("arrows", d.arrows.is_some())?;
                unexpected("blocks", d.blocks.is_some())?;
                let orders = d
                    .orders
                    .clone()
                    .ok_or_else(|| SpecError::Invalid("group backend needs `orders`".into()))?;
                Ok(Backend::group_algebra(field, orders, d.labels.clone())?)
            }
            "matvec" => {
                unexpected("vertices", d.vertices.is_some())?;
                unexpected("arrows", d.arrows.is_some())?;
                unexpected("orders", d.orders.is_some())?;
                unexpected("labels", d.labels.is_some())?;
                let blocks = d
                    .blocks
                    .clone()
                    .ok_or_else(|| SpecError::Invalid("matvec backend needs `blocks`".into()))?;
                if blocks.is_empty() {
                    return Err(SpecError::EmptyBackend);
                }
                Ok(Backend::matvec(field, blocks)?)
            }
            other => Err(SpecError::Invalid(format!(
                "unknown backend kind `{other}` (expected path, group or matvec)"
            ))),
        }
    }

    fn build_object(&self, loaded: &Loaded, name: &str, resolving: &mut BTreeSet<String>) -> SpecResult<Obj> {
        if let Some(x) = loaded.objects.get(name) {
            return Ok(x.clone());
        }
        let Some(def) = self.objects.get(name) else {
            return loaded.object(name);
        };
        if !resolving.insert(name.to_string()) {
            return Err(SpecError::Invalid(format!("object `{name}` is defined in terms of itself")));
        }
        let b = &loaded.backend;
        let field = b.field();
        let given = [def.dims.is_some(), def.grid.is_some(), def.simple.is_some(), def.sum.is_some()];
        if given.iter().filter(|g| **g).count() != 1 || (def.actions.is_some() && def.dims.is_none()) {
            return Err(SpecError::Invalid(format!(
                "object `{name}` needs exactly one of `dims` (with `actions`), `grid`, `simple` or `sum`"
            )));
        }
        let out = if let Some(dims) = &def.dims {
            let actions = def
                .actions
                .clone()
                .unwrap_or_default()
                .iter()
                .enumerate()
                .map(|(a, m)| matrix(field, m).map_err(|e| SpecError::Invalid(format!("object `{name}`, arrow {}: {e}", a + 1))))
                .collect::<SpecResult<Vec<_>>>()?;
            Obj::new(b, dims.clone(), actions).map_err(|e| SpecError::Invalid(format!("object `{name}`: {e}")))?
        } else if let Some(grid) = &def.grid {
            Obj::matvec_grid(b, grid).map_err(|e| SpecError::Invalid(format!("object `{name}`: {e}")))?
        } else if let Some(label) = &def.simple {
            let s = b
                .simple_index(label)
                .map_err(|_| SpecError::UnresolvedLabel(label.clone()))?;
            b.simple(s)
        } else {
            let parts = def
                .sum
                .as_ref()
                .expect("checked above")
                .iter()
                .map(|p| self.build_object(loaded, p, resolving))
                .collect::<SpecResult<Vec<_>>>()?;
            if parts.is_empty() {
                Obj::zero(b)
            } else {
                direct_sum_all(&parts)?.0
            }
        };
        resolving.remove(name);
        Ok(out)
    }
}

fn matrix(field: Field, rows: &[Vec<Scalar>]) -> Result<Mat, String> {
    let cols = rows.first().map_or(0, Vec::len);
    let parsed = rows
        .iter()
        .map(|r| {
            if r.len() != cols {
                return Err("ragged matrix".to_string());
            }
            r.iter()
                .map(|x| match x {
                    Scalar::Int(n) => Ok(field.int(*n)),
                    Scalar::Text(s) => parse_elem(field, s),
                })
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Mat::from_rows(field, cols, parsed).map_err(|e| e.to_string())
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Loads a spec from a file path or a preset name.
pub fn load(source: &str) -> SpecResult<Loaded> {
    let path = Path::new(source);
    if !path.exists() {
        if let Ok(p) = preset(source, None) {
            return Ok(p);
        }
        if source.ends_with(".json") || source.contains('/') {
            return Err(SpecError::Io {
                path: source.to_string(),
                message: "no such file".into(),
            });
        }
        return preset(source, None);
    }
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io {
        path: source.to_string(),
        message: e.to_string(),
    })?;
    SpecFile::parse(&text)?.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_path_spec() {
        let text = r#"{
            "backend": {"kind": "path", "field": "GF(3)", "vertices": 2, "arrows": [[1, 2]]},
            "serre": ["S2"],
            "objects": {
                "M": {"dims": [1, 1], "actions": [[["2"]]]},
                "D": {"sum": ["M", "S1"]}
            }
        }"#;
        let l = SpecFile::parse(text).unwrap().resolve().unwrap();
        assert_eq!(l.serre.labels(), vec!["S2"]);
        assert_eq!(l.object("D").unwrap().dims(), &[2, 1]);
        assert_eq!(l.object("S2").unwrap().dim(), 1);
        assert!(matches!(l.object("Q"), Err(SpecError::UnknownObject(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = SpecFile::parse("{\n  \"backend\": {\"preset\": \"repz2\"},\n  \"serre\": [W1]\n}").unwrap_err();
        match err {
            SpecError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 13)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fractions_and_bad_labels() {
        let text = r#"{"backend": {"kind": "group", "field": "Q", "orders": [2]},
            "objects": {"X": {"dims": [1], "actions": [[["-2/2"]]]}}}"#;
        let l = SpecFile::parse(text).unwrap().resolve().unwrap();
        assert_eq!(l.object("X").unwrap().dims(), &[1]);
        let bad = r#"{"backend": {"preset": "repz2"}, "serre": ["W3"]}"#;
        assert!(matches!(
            SpecFile::parse(bad).unwrap().resolve(),
            Err(SpecError::UnresolvedLabel(l)) if l == "W3"
        ));
        let float = r#"{"backend": {"preset": "repz2"}, "objects": {"X": {"dims": [1], "actions": [[[0.5]]]}}}"#;
        assert!(SpecFile::parse(float).is_err());
    }

    #[test]
    fn empty_matvec_is_rejected() {
        let text = r#"{"backend": {"kind": "matvec", "field": "Q", "blocks": []}}"#;
        assert!(matches!(SpecFile::parse(text).unwrap().resolve(), Err(SpecError::EmptyBackend)));
        assert!(matches!(preset("matvec:", None), Err(SpecError::EmptyBackend)));
    }

    #[test]
    fn presets_resolve() {
        assert_eq!(preset("repz2", None).unwrap().backend.simple_count(), 2);
        assert_eq!(preset("matvec:2,1", None).unwrap().backend.simple_count(), 5);
        assert_eq!(preset("pathA2", None).unwrap().object("M12").unwrap().dim(), 2);
        assert_eq!(preset("repz3", None).unwrap().backend.simple_count(), 3);
        assert_eq!(preset("group:2,2", Some(Field::Prime(3))).unwrap().backend.simple_count(), 4);
        assert!(preset("nope", None).is_err());
    }
}
