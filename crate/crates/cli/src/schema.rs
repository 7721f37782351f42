//! Target-description file parsing: JSON to validated models, with
//! every error naming the schema path of the offending field.
//!
//! Format summary (version 1):
//!
//! ```text
//! { "format_version": 1, "model": "Q",
//!   "group": {"cayley": [[..]]} | {"permutation_generators": [[cycle..]..]},
//!   "euler_table": {"<subgroup key>": <integer>, ..},
//!   "divisor_table": {"<subgroup key>": "p/q", ..} }          (optional)
//!
//! { "format_version": 1, "model": "L",
//!   "torus_rank": r, "twist_order": J,
//!   "fixed_points": [ { "label": "p0", "group": {..},
//!       "tangent": [ {"tweight": [w..], "dim": d,
//!                     "character": {"<class rep>": ["p/q", ..], ..}} ..],
//!       "bundle": [piece..],                                  (optional)
//!       "divisor_lift": {"t": ["p/q" x r], "const": "p/q"} } ..] }
//! ```
//!
//! Subgroup keys are comma-joined sorted element indices of the
//! canonical (lexicographically least) conjugacy-class representative.
//! Character keys are the canonical conjugacy-class representatives
//! (least element index per class); coefficient lists are cyclotomic
//! coefficients whose length must divide the group exponent.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::Value;

use orbigw_core::cyclotomic::CyclotomicValue;
use orbigw_core::group::FiniteGroup;
use orbigw_core::invariants::{Target, TargetModelQ};
use orbigw_core::localize::{FixedPointDatum, TargetModelL};
use orbigw_core::poly::{TorusPolynomial, VarSet};
use orbigw_core::rat::Rat;
use orbigw_core::rep::{ClassFunction, EquivariantRep, IsotypicPiece};

/// A command-line-level failure, rendered as machine-readable JSON.
#[derive(Debug)]
pub enum CliError {
    Io {
        file: String,
        message: String,
    },
    /// Malformed JSON (message carries line and column).
    Parse {
        file: String,
        message: String,
    },
    /// Well-formed JSON violating the target schema.
    Schema {
        file: String,
        path: String,
        message: String,
    },
    /// Structurally valid input failing a model invariant, or a
    /// computation-level error.
    Model {
        message: String,
    },
    Usage {
        message: String,
    },
}

impl CliError {
    pub fn model(e: orbigw_core::Error) -> Self {
        CliError::Model {
            message: e.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut inner = serde_json::Map::new();
        let (kind, message) = match self {
            CliError::Io { file, message } => {
                inner.insert("file".into(), Value::String(file.clone()));
                ("io", message.clone())
            }
            CliError::Parse { file, message } => {
                inner.insert("file".into(), Value::String(file.clone()));
                ("parse", message.clone())
            }
            CliError::Schema {
                file,
                path,
                message,
            } => {
                inner.insert("file".into(), Value::String(file.clone()));
                inner.insert("path".into(), Value::String(path.clone()));
                ("schema", message.clone())
            }
            CliError::Model { message } => ("model", message.clone()),
            CliError::Usage { message } => ("usage", message.clone()),
        };
        inner.insert("kind".into(), Value::String(kind.into()));
        inner.insert("message".into(), Value::String(message));
        let mut outer = serde_json::Map::new();
        outer.insert("error".into(), Value::Object(inner));
        Value::Object(outer)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { file, message } => write!(f, "{file}: {message}"),
            CliError::Parse { file, message } => write!(f, "{file}: {message}"),
            CliError::Schema {
                file,
                path,
                message,
            } => write!(f, "{file}: at {path}: {message}"),
            CliError::Model { message } => write!(f, "{message}"),
            CliError::Usage { message } => write!(f, "{message}"),
        }
    }
}

type ParseResult<T> = Result<T, CliError>;

/// Path-tracking cursor over a JSON document.
struct Cursor<'v> {
    file: &'v str,
    path: String,
    value: &'v Value,
}

impl<'v> Cursor<'v> {
    fn err<T>(&self, message: impl Into<String>) -> ParseResult<T> {
        Err(CliError::Schema {
            file: self.file.to_string(),
            path: if self.path.is_empty() {
                "(root)".to_string()
            } else {
                self.path.clone()
            },
            message: message.into(),
        })
    }

    fn child(&self, segment: &str, value: &'v Value) -> Cursor<'v> {
        let path = if self.path.is_empty() {
            segment.to_string()
        } else if segment.starts_with('[') {
            format!("{}{}", self.path, segment)
        } else {
            format!("{}.{}", self.path, segment)
        };
        Cursor {
            file: self.file,
            path,
            value,
        }
    }

    fn as_object(&self) -> ParseResult<&'v serde_json::Map<String, Value>> {
        self.value
            .as_object()
            .ok_or(())
            .or_else(|_| self.err("expected an object"))
    }

    fn as_array(&self) -> ParseResult<&'v Vec<Value>> {
        self.value
            .as_array()
            .ok_or(())
            .or_else(|_| self.err("expected an array"))
    }

    fn as_str(&self) -> ParseResult<&'v str> {
        self.value
            .as_str()
            .ok_or(())
            .or_else(|_| self.err("expected a string"))
    }

    fn as_usize(&self) -> ParseResult<usize> {
        match self.value.as_u64() {
            Some(v) => usize::try_from(v).map_err(|_| ()).or_else(|_| self.err("integer too large")),
            None => self.err("expected a nonnegative integer"),
        }
    }

    fn as_i64(&self) -> ParseResult<i64> {
        self.value
            .as_i64()
            .ok_or(())
            .or_else(|_| self.err("expected an integer"))
    }

    fn field(&self, name: &str) -> ParseResult<Cursor<'v>> {
        let obj = self.as_object()?;
        match obj.get(name) {
            Some(v) => Ok(self.child(name, v)),
            None => self.err(format!("missing required field \"{name}\"")),
        }
    }

    fn optional(&self, name: &str) -> ParseResult<Option<Cursor<'v>>> {
        let obj = self.as_object()?;
        Ok(obj.get(name).map(|v| self.child(name, v)))
    }

    fn items(&self) -> ParseResult<Vec<Cursor<'v>>> {
        Ok(self
            .as_array()?
            .iter()
            .enumerate()
            .map(|(i, v)| self.child(&format!("[{i}]"), v))
            .collect())
    }

    fn as_rat(&self) -> ParseResult<Rat> {
        let s = self.as_str()?;
        match s.parse::<Rat>() {
            Ok(r) => Ok(r),
            Err(_) => self.err(format!("expected a rational \"p/q\", got \"{s}\"")),
        }
    }
}

/// Wraps a model-level failure with the schema path it arose at.
fn model_at(cur: &Cursor<'_>, e: orbigw_core::Error) -> CliError {
    CliError::Schema {
        file: cur.file.to_string(),
        path: if cur.path.is_empty() {
            "(root)".to_string()
        } else {
            cur.path.clone()
        },
        message: e.to_string(),
    }
}

fn reject_unknown_fields(
    cur: &Cursor<'_>,
    allowed: &[&str],
) -> ParseResult<()> {
    for key in cur.as_object()?.keys() {
        if !allowed.contains(&key.as_str()) {
            return cur.err(format!("unknown field \"{key}\""));
        }
    }
    Ok(())
}

/// Reads and fully validates a target file. An explicit `twist_order`
/// overrides the file's value on localization models.
pub fn parse_target(
    path: &Path,
    twist_override: Option<usize>,
    order_cap: usize,
) -> ParseResult<Target> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        file: file.clone(),
        message: e.to_string(),
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        file: file.clone(),
        message: e.to_string(),
    })?;
    let root = Cursor {
        file: &file,
        path: String::new(),
        value: &value,
    };

    let version = root.field("format_version")?.as_usize()?;
    if version != 1 {
        return root
            .field("format_version")?
            .err(format!("unsupported format version {version}"));
    }
    let model = root.field("model")?;
    match model.as_str()? {
        "Q" => {
            reject_unknown_fields(
                &root,
                &["format_version", "model", "group", "euler_table", "divisor_table"],
            )?;
            parse_model_q(&root, order_cap).map(Target::Q)
        }
        "L" => {
            reject_unknown_fields(
                &root,
                &[
                    "format_version",
                    "model",
                    "torus_rank",
                    "twist_order",
                    "fixed_points",
                ],
            )?;
            parse_model_l(&root, twist_override, order_cap).map(Target::L)
        }
        other => model.err(format!("model must be \"Q\" or \"L\", got \"{other}\"")),
    }
}

fn parse_group(cur: &Cursor<'_>, order_cap: usize) -> ParseResult<FiniteGroup> {
    reject_unknown_fields(cur, &["cayley", "permutation_generators"])?;
    let cayley = cur.optional("cayley")?;
    let gens = cur.optional("permutation_generators")?;
    match (cayley, gens) {
        (Some(c), None) => {
            let mut rows = Vec::new();
            for row in c.items()? {
                let mut entries = Vec::new();
                for e in row.items()? {
                    entries.push(e.as_usize()?);
                }
                rows.push(entries);
            }
            match FiniteGroup::from_cayley(&rows, order_cap) {
                Ok(grp) => Ok(grp),
                Err(e) => c.err(e.to_string()),
            }
        }
        (None, Some(g)) => {
            let mut generators = Vec::new();
            for gen in g.items()? {
                let mut cycles = Vec::new();
                for cycle in gen.items()? {
                    let mut points = Vec::new();
                    for p in cycle.items()? {
                        points.push(p.as_usize()?);
                    }
                    cycles.push(points);
                }
                generators.push(cycles);
            }
            match FiniteGroup::from_permutation_generators(&generators, order_cap) {
                Ok(grp) => Ok(grp),
                Err(e) => g.err(e.to_string()),
            }
        }
        _ => cur.err("group needs exactly one of \"cayley\" or \"permutation_generators\""),
    }
}

/// "0,1,3" -> [0, 1, 3]; must be strictly increasing.
fn parse_subgroup_key(cur: &Cursor<'_>, key: &str) -> ParseResult<Vec<usize>> {
    let mut elems = Vec::new();
    for part in key.split(',') {
        let e: usize = part
            .trim()
            .parse()
            .map_err(|_| ())
            .or_else(|_: ()| cur.err(format!("bad subgroup key \"{key}\"")))?;
        elems.push(e);
    }
    if elems.windows(2).any(|w| w[0] >= w[1]) {
        return cur.err(format!(
            "subgroup key \"{key}\" must list element indices in strictly increasing order"
        ));
    }
    Ok(elems)
}

fn parse_model_q(root: &Cursor<'_>, order_cap: usize) -> ParseResult<TargetModelQ> {
    let group = parse_group(&root.field("group")?, order_cap)?;

    let table_cur = root.field("euler_table")?;
    let mut euler_table = BTreeMap::new();
    for (key, value) in table_cur.as_object()? {
        let entry = table_cur.child(key, value);
        let elems = parse_subgroup_key(&entry, key)?;
        euler_table.insert(elems, entry.as_i64()?);
    }

    let divisor_table = match root.optional("divisor_table")? {
        None => None,
        Some(div_cur) => {
            let mut table = BTreeMap::new();
            for (key, value) in div_cur.as_object()? {
                let entry = div_cur.child(key, value);
                let elems = parse_subgroup_key(&entry, key)?;
                table.insert(elems, entry.as_rat()?);
            }
            Some(table)
        }
    };

    let model = TargetModelQ {
        group,
        euler_table,
        divisor_table,
    };
    model.validate().map_err(CliError::model)?;
    Ok(model)
}

fn parse_model_l(
    root: &Cursor<'_>,
    twist_override: Option<usize>,
    order_cap: usize,
) -> ParseResult<TargetModelL> {
    let rank = root.field("torus_rank")?.as_usize()?;
    let twist = match twist_override {
        Some(j) => j,
        None => root.field("twist_order")?.as_usize()?,
    };
    let vars = VarSet::new(rank, twist);

    let mut points = Vec::new();
    let mut labels = std::collections::BTreeSet::new();
    for point_cur in root.field("fixed_points")?.items()? {
        reject_unknown_fields(
            &point_cur,
            &["label", "group", "tangent", "bundle", "divisor_lift"],
        )?;
        let label_cur = point_cur.field("label")?;
        let label = label_cur.as_str()?.to_string();
        if !labels.insert(label.clone()) {
            return label_cur.err(format!("duplicate fixed-point label \"{label}\""));
        }
        let group = parse_group(&point_cur.field("group")?, order_cap)?;
        let tangent = parse_rep(&point_cur.field("tangent")?, &group, rank)?;
        let bundle = match point_cur.optional("bundle")? {
            Some(b) => Some(parse_rep(&b, &group, rank)?),
            None => None,
        };
        let divisor_lift = match point_cur.optional("divisor_lift")? {
            Some(l) => Some(parse_lift(&l, vars)?),
            None => None,
        };
        points.push(FixedPointDatum {
            label,
            stabilizer: group,
            tangent,
            bundle,
            divisor_lift,
        });
    }

    let model = TargetModelL {
        rank,
        twist,
        points,
    };
    model.validate().map_err(CliError::model)?;
    Ok(model)
}

fn parse_rep(cur: &Cursor<'_>, group: &FiniteGroup, rank: usize) -> ParseResult<EquivariantRep> {
    let mut pieces = Vec::new();
    for piece_cur in cur.items()? {
        reject_unknown_fields(&piece_cur, &["tweight", "dim", "character"])?;
        let mut tweight = Vec::new();
        for w in piece_cur.field("tweight")?.items()? {
            tweight.push(w.as_i64()?);
        }
        if tweight.len() != rank {
            return piece_cur
                .field("tweight")?
                .err(format!("expected {rank} weight entries, got {}", tweight.len()));
        }
        let dim = piece_cur.field("dim")?.as_usize()?;
        let character = parse_character(&piece_cur.field("character")?, group)?;
        let piece = IsotypicPiece::new(group, tweight, dim, character)
            .map_err(|e| model_at(&piece_cur, e))?;
        pieces.push(piece);
    }
    EquivariantRep::new(rank, pieces).map_err(|e| model_at(cur, e))
}

/// Characters are keyed by the canonical conjugacy-class
/// representatives (least element index of each class) and must cover
/// every class.
fn parse_character(cur: &Cursor<'_>, group: &FiniteGroup) -> ParseResult<ClassFunction> {
    let reps = group.class_representatives();
    let obj = cur.as_object()?;
    let mut values = Vec::with_capacity(reps.len());
    for &rep in &reps {
        let key = rep.to_string();
        let entry = match obj.get(&key) {
            Some(v) => cur.child(&key, v),
            None => {
                return cur.err(format!(
                    "missing value for conjugacy class representative {rep}"
                ))
            }
        };
        let mut coeffs = Vec::new();
        for c in entry.items()? {
            coeffs.push(c.as_rat()?);
        }
        if coeffs.is_empty() {
            return entry.err("cyclotomic coefficient list must be nonempty");
        }
        if !group.exponent().is_multiple_of(coeffs.len()) {
            return entry.err(format!(
                "coefficient list length {} does not divide the group exponent {}",
                coeffs.len(),
                group.exponent()
            ));
        }
        values.push(CyclotomicValue::from_coeffs(coeffs).map_err(|e| model_at(&entry, e))?);
    }
    for key in obj.keys() {
        let known = key
            .parse::<usize>()
            .ok()
            .map(|k| reps.contains(&k))
            .unwrap_or(false);
        if !known {
            return cur.err(format!(
                "\"{key}\" is not a canonical conjugacy class representative (expected one of {reps:?})"
            ));
        }
    }
    ClassFunction::new(group, values).map_err(|e| model_at(cur, e))
}

/// Canonical serialized form of a parsed target: groups as Cayley
/// tables, characters as full-length coefficient lists at the exponent
/// modulus. Parsing the result reproduces the model exactly.
pub fn target_json(target: &Target) -> Value {
    let mut root = serde_json::Map::new();
    root.insert("format_version".into(), Value::from(1));
    match target {
        Target::Q(model) => {
            root.insert("model".into(), Value::String("Q".into()));
            root.insert("group".into(), group_json(&model.group));
            root.insert("euler_table".into(), table_json(&model.euler_table, Value::from));
            if let Some(div) = &model.divisor_table {
                root.insert(
                    "divisor_table".into(),
                    table_json(div, |r| Value::String(r.to_string())),
                );
            }
        }
        Target::L(model) => {
            root.insert("model".into(), Value::String("L".into()));
            root.insert("torus_rank".into(), Value::from(model.rank));
            root.insert("twist_order".into(), Value::from(model.twist));
            let points: Vec<Value> = model
                .points
                .iter()
                .map(|p| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("label".into(), Value::String(p.label.clone()));
                    obj.insert("group".into(), group_json(&p.stabilizer));
                    obj.insert("tangent".into(), rep_json(&p.stabilizer, &p.tangent));
                    if let Some(b) = &p.bundle {
                        obj.insert("bundle".into(), rep_json(&p.stabilizer, b));
                    }
                    if let Some(l) = &p.divisor_lift {
                        obj.insert("divisor_lift".into(), lift_json(l, model.rank));
                    }
                    Value::Object(obj)
                })
                .collect();
            root.insert("fixed_points".into(), Value::Array(points));
        }
    }
    Value::Object(root)
}

fn group_json(group: &FiniteGroup) -> Value {
    let n = group.order();
    let rows: Vec<Value> = (0..n)
        .map(|a| Value::Array((0..n).map(|b| Value::from(group.mul(a, b))).collect()))
        .collect();
    serde_json::json!({ "cayley": rows })
}

fn table_json<T>(table: &BTreeMap<Vec<usize>, T>, value: impl Fn(T) -> Value) -> Value
where
    T: Clone,
{
    let mut obj = serde_json::Map::new();
    for (key, v) in table {
        let name = key
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        obj.insert(name, value(v.clone()));
    }
    Value::Object(obj)
}

fn rep_json(group: &FiniteGroup, rep: &EquivariantRep) -> Value {
    let reps = group.class_representatives();
    let pieces: Vec<Value> = rep
        .pieces
        .iter()
        .map(|piece| {
            let mut character = serde_json::Map::new();
            for (class_idx, &rep_elem) in reps.iter().enumerate() {
                let coeffs: Vec<Value> = piece.character.values()[class_idx]
                    .coeffs()
                    .iter()
                    .map(|c| Value::String(c.to_string()))
                    .collect();
                character.insert(rep_elem.to_string(), Value::Array(coeffs));
            }
            serde_json::json!({
                "tweight": piece.tweight,
                "dim": piece.dim,
                "character": Value::Object(character),
            })
        })
        .collect();
    Value::Array(pieces)
}

fn lift_json(lift: &TorusPolynomial, rank: usize) -> Value {
    let mut t_coeffs = vec![Rat::zero(); rank];
    let mut constant = Rat::zero();
    for (exp, coeff) in lift.terms() {
        match exp.iter().position(|&e| e > 0) {
            Some(i) => t_coeffs[i] = coeff.clone(),
            None => constant = coeff.clone(),
        }
    }
    let mut obj = serde_json::Map::new();
    obj.insert(
        "t".into(),
        Value::Array(
            t_coeffs
                .iter()
                .map(|c| Value::String(c.to_string()))
                .collect(),
        ),
    );
    if !constant.is_zero() {
        obj.insert("const".into(), Value::String(constant.to_string()));
    }
    Value::Object(obj)
}

/// {"t": [c1..cr], "const": c0} -> c0 + sum ci * ti.
fn parse_lift(cur: &Cursor<'_>, vars: VarSet) -> ParseResult<TorusPolynomial> {
    reject_unknown_fields(cur, &["t", "const"])?;
    let mut lift = TorusPolynomial::zero(vars);
    let t_cur = cur.field("t")?;
    let coeffs = t_cur.items()?;
    if coeffs.len() != vars.rank {
        return t_cur.err(format!(
            "expected {} coefficients, got {}",
            vars.rank,
            coeffs.len()
        ));
    }
    for (i, c) in coeffs.iter().enumerate() {
        let coeff = c.as_rat()?;
        let mut unit = vec![0i64; vars.rank];
        unit[i] = 1;
        lift = lift.add(&TorusPolynomial::from_weight(vars, &unit).scale(&coeff));
    }
    if let Some(konst) = cur.optional("const")? {
        lift = lift.add(&TorusPolynomial::constant(vars, konst.as_rat()?));
    }
    Ok(lift)
}
