//! Builtin models and JSON ingestion/export.
//!
//! Lie basis orders:
//! - `sl2`: e_+, e_-, h
//! - `gl2`: e_+, e_-, h, z (z the identity matrix)
//! - `b2`: h, e with [h,e] = e
//! - `heis3`: x, y, z with [x,y] = z (strictly upper triangular 3x3)
//! - `sl3`: e_12, e_13, e_23, e_21, e_31, e_32, h_1, h_2
//! - `jacobson:p`: e, f, e_1..e_p over GF(p)
//! - `witt:p`: e_-1, e_0, ..., e_{p-2} over GF(p)
//!
//! Names joined by `+` give direct sums; a suffix `@p` builds a classical
//! model over GF(p) instead of Q.
//!
//! Groups: `sym:n`, `alt:n`, `cyclic:n`, `dihedral:n` (order 2n), `q8`,
//! `sl2:q`, `psl2:q`, `sl3:q`, `psl3:q` and `sz:8`. `G*H` is the direct
//! product and `wr2(G)` is (G x G) extended by the factor swap. Matrix groups
//! are generated by elementary transvections; the projective ones are taken
//! modulo scalars. Sz(8) generators live in `data/sz8.json`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{is_prime, Field, FieldSpec, FiniteField, Rationals};
use crate::group::{direct_product, parse_cycles, semidirect_product, Automorphism, FiniteGroup, Key, Repr};
use crate::lie::LieAlgebra;

fn bad(model: &str, reason: impl Into<String>) -> Error {
    Error::BadParams {
        model: model.to_string(),
        reason: reason.into(),
    }
}

/// A Lie algebra over whichever field the model or file asked for.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyLie {
    Rational(LieAlgebra<Rationals>),
    Finite(LieAlgebra<FiniteField>),
}

impl AnyLie {
    pub fn dim(&self) -> usize {
        match self {
            AnyLie::Rational(l) => l.dim(),
            AnyLie::Finite(l) => l.dim(),
        }
    }

    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyLie::Rational(l) => l.field().spec(),
            AnyLie::Finite(l) => l.field().spec(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyLie::Rational(l) => export_lie(l),
            AnyLie::Finite(l) => export_lie(l),
        }
    }
}

// ---------------------------------------------------------------------------
// Lie models

type Entries = Vec<(usize, usize, usize, i64)>;

fn from_entries<F: Field>(field: &F, names: &[&str], entries: &Entries) -> Result<LieAlgebra<F>> {
    let d = names.len();
    let mut t = vec![vec![vec![field.zero(); d]; d]; d];
    for &(i, j, k, v) in entries {
        let c = field.from_i64(v);
        t[i][j][k] = field.add(&t[i][j][k], &c);
        t[j][i][k] = field.sub(&t[j][i][k], &c);
    }
    LieAlgebra::new(field, t, names.iter().map(|s| s.to_string()).collect())
}

/// Structure constants of the linear Lie algebra spanned by integer matrices.
fn matrix_entries(basis: &[Vec<Vec<i64>>]) -> Entries {
    let n = basis[0].len();
    let flat = |m: &Vec<Vec<i64>>| -> Vec<i64> { m.iter().flatten().copied().collect() };
    let flats: Vec<Vec<i64>> = basis.iter().map(flat).collect();
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (a, b) = (&basis[i], &basis[j]);
            let mut c = vec![vec![0i64; n]; n];
            for r in 0..n {
                for s in 0..n {
                    for t in 0..n {
                        c[r][s] += a[r][t] * b[t][s] - b[r][t] * a[t][s];
                    }
                }
            }
            let coords = solve_integer_combination(&flats, &flat(&c));
            for (k, v) in coords.into_iter().enumerate() {
                if v != 0 {
                    out.push((i, j, k, v));
                }
            }
        }
    }
    out
}

/// Coordinates of `target` in the rational span of `basis`; the matrices used
/// here always give integer coordinates.
fn solve_integer_combination(basis: &[Vec<i64>], target: &[i64]) -> Vec<i64> {
    let q = Rationals;
    let rows: Vec<Vec<_>> = (0..target.len())
        .map(|e| {
            basis
                .iter()
                .map(|b| q.from_i64(b[e]))
                .chain(std::iter::once(q.from_i64(target[e])))
                .collect()
        })
        .collect();
    let mut m = rows;
    let pivots = crate::linalg::rref(&q, &mut m);
    let k = basis.len();
    let mut x = vec![0i64; k];
    for (row, &pc) in m.iter().zip(&pivots) {
        assert!(pc < k, "target outside the span");
        x[pc] = crate::field::rational_to_i64(&row[k]).expect("integer coordinate");
    }
    x
}

fn unit(n: usize, r: usize, c: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    m[r][c] = 1;
    m
}

fn diag(entries: &[i64]) -> Vec<Vec<i64>> {
    let n = entries.len();
    let mut m = vec![vec![0; n]; n];
    for (i, &e) in entries.iter().enumerate() {
        m[i][i] = e;
    }
    m
}

fn classical(name: &str) -> Option<(Vec<&'static str>, Entries)> {
    let (names, mats): (Vec<&str>, Vec<Vec<Vec<i64>>>) = match name {
        "sl2" => (
            vec!["e_+", "e_-", "h"],
            vec![unit(2, 0, 1), unit(2, 1, 0), diag(&[1, -1])],
        ),
        "gl2" => (
            vec!["e_+", "e_-", "h", "z"],
            vec![unit(2, 0, 1), unit(2, 1, 0), diag(&[1, -1]), diag(&[1, 1])],
        ),
        "b2" => (vec!["h", "e"], vec![diag(&[1, 0]), unit(2, 0, 1)]),
        "heis3" => (
            vec!["x", "y", "z"],
            vec![unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)],
        ),
        "sl3" => (
            vec!["e_12", "e_13", "e_23", "e_21", "e_31", "e_32", "h_1", "h_2"],
            vec![
                unit(3, 0, 1),
                unit(3, 0, 2),
                unit(3, 1, 2),
                unit(3, 1, 0),
                unit(3, 2, 0),
                unit(3, 2, 1),
                diag(&[1, -1, 0]),
                diag(&[0, 1, -1]),
            ],
        ),
        _ => return None,
    };
    Some((names, matrix_entries(&mats)))
}

pub const CLASSICAL_LIE: [&str; 5] = ["sl2", "gl2", "b2", "heis3", "sl3"];

/// Classical model over any field.
pub fn classical_lie<F: Field>(name: &str, field: &F) -> Result<LieAlgebra<F>> {
    let (names, entries) = classical(name).ok_or_else(|| bad(name, "unknown Lie model"))?;
    from_entries(field, &names, &entries)
}

pub fn builtin_lie_q(name: &str) -> Result<LieAlgebra<Rationals>> {
    let mut parts = name.split('+');
    let first = parts.next().unwrap_or_default();
    let mut alg = classical_lie(first.trim(), &Rationals)?;
    for part in parts {
        alg = alg.direct_sum(&classical_lie(part.trim(), &Rationals)?)?;
    }
    Ok(alg)
}

fn check_prime(model: &str, p: u32) -> Result<FiniteField> {
    if !is_prime(p as u64) {
        return Err(bad(model, format!("p = {p} is not prime")));
    }
    FiniteField::prime(p)
}

/// Jacobson's solvable algebra of dimension p + 2:
/// [e,f] = e, [e,e_i] = e_{i+1} (indices mod p), [f,e_i] = (3-i) e_i,
/// [e_i,e_j] = 0. The coefficient of [f,e_i] is the one forced by Jacobi
/// once [f,e_2] = e_2.
pub fn jacobson(p: u32) -> Result<LieAlgebra<FiniteField>> {
    let field = check_prime("jacobson", p)?;
    let p = p as usize;
    let mut names = vec!["e".to_string(), "f".to_string()];
    names.extend((1..=p).map(|i| format!("e_{i}")));
    let ei = |i: usize| 1 + i; // e_i for 1 <= i <= p
    let mut entries: Entries = vec![(0, 1, 0, 1)];
    for i in 1..=p {
        let next = if i == p { 1 } else { i + 1 };
        entries.push((0, ei(i), ei(next), 1));
        entries.push((1, ei(i), ei(i), 3 - i as i64));
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    from_entries(&field, &refs, &entries)
}

/// The Witt algebra W(1;1): basis e_-1..e_{p-2}, [e_i,e_j] = (j-i) e_{i+j}
/// when -1 <= i+j <= p-2, else 0.
pub fn witt(p: u32) -> Result<LieAlgebra<FiniteField>> {
    if p <= 2 {
        return Err(bad("witt", "p must be an odd prime"));
    }
    let field = check_prime("witt", p)?;
    let top = p as i64 - 2;
    let idx = |i: i64| (i + 1) as usize;
    let names: Vec<String> = (-1..=top).map(|i| format!("e_{i}")).collect();
    let mut entries = Entries::new();
    for i in -1..=top {
        for j in i + 1..=top {
            if (-1..=top).contains(&(i + j)) && j != i {
                entries.push((idx(i), idx(j), idx(i + j), j - i));
            }
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    from_entries(&field, &refs, &entries)
}

pub fn builtin_lie_finite(name: &str, p: u32) -> Result<LieAlgebra<FiniteField>> {
    match name {
        "jacobson" => jacobson(p),
        "witt" => witt(p),
        other => {
            let field = check_prime(other, p)?;
            let mut parts = other.split('+');
            let mut alg = classical_lie(parts.next().unwrap_or_default().trim(), &field)?;
            for part in parts {
                alg = alg.direct_sum(&classical_lie(part.trim(), &field)?)?;
            }
            Ok(alg)
        }
    }
}

/// Resolves a command-line model name such as `sl2`, `sl2+b2`, `jacobson:5`,
/// `witt:7` or `heis3@5`.
pub fn builtin_lie(name: &str) -> Result<AnyLie> {
    let parse_p = |s: &str| -> Result<u32> { s.parse().map_err(|_| bad(name, format!("bad parameter {s:?}"))) };
    if let Some((model, p)) = name.split_once(':') {
        return Ok(AnyLie::Finite(builtin_lie_finite(model, parse_p(p)?)?));
    }
    if let Some((model, p)) = name.split_once('@') {
        return Ok(AnyLie::Finite(builtin_lie_finite(model, parse_p(p)?)?));
    }
    Ok(AnyLie::Rational(builtin_lie_q(name)?))
}

// ---------------------------------------------------------------------------
// Lie JSON schema

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieFile {
    field: FieldSpec,
    dim: usize,
    basis: Vec<String>,
    table: Vec<LieEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieEntry {
    i: usize,
    j: usize,
    c: Vec<LieCoeff>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LieCoeff {
    k: usize,
    v: String,
}

/// Canonical JSON: entries with i < j in lexicographic order, nonzero
/// coefficients only, keys sorted.
pub fn export_lie<F: Field>(l: &LieAlgebra<F>) -> Value {
    let f = l.field();
    let mut table = Vec::new();
    for i in 0..l.dim() {
        for j in i + 1..l.dim() {
            let c: Vec<Value> = (0..l.dim())
                .filter(|&k| !f.is_zero(l.structure_constant(i, j, k)))
                .map(|k| json!({ "k": k, "v": f.format(l.structure_constant(i, j, k)) }))
                .collect();
            if !c.is_empty() {
                table.push(json!({ "i": i, "j": j, "c": c }));
            }
        }
    }
    json!({
        "field": serde_json::to_value(f.spec()).expect("serializable"),
        "dim": l.dim(),
        "basis": l.names(),
        "table": table,
    })
}

fn schema(location: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::SchemaError {
        location: location.into(),
        reason: reason.into(),
    }
}

fn validation(location: impl Into<String>, source: Error) -> Error {
    Error::ValidationError {
        location: location.into(),
        source: Box::new(source),
    }
}

fn lie_from_file<F: Field>(field: &F, file: &LieFile, origin: &str) -> Result<LieAlgebra<F>> {
    let d = file.dim;
    if file.basis.len() != d {
        return Err(schema(format!("{origin}: basis"), format!("expected {d} names, found {}", file.basis.len())));
    }
    let mut t = vec![vec![vec![field.zero(); d]; d]; d];
    let mut seen = BTreeMap::new();
    for (n, entry) in file.table.iter().enumerate() {
        let loc = format!("{origin}: table[{n}]");
        if entry.i >= entry.j || entry.j >= d {
            return Err(schema(loc, format!("need i < j < {d}, found ({}, {})", entry.i, entry.j)));
        }
        if seen.insert((entry.i, entry.j), n).is_some() {
            return Err(schema(loc, format!("duplicate entry ({}, {})", entry.i, entry.j)));
        }
        for (m, c) in entry.c.iter().enumerate() {
            let cloc = format!("{loc}.c[{m}]");
            if c.k >= d {
                return Err(schema(cloc, format!("k = {} out of range", c.k)));
            }
            let v = field.parse(&c.v).map_err(|e| validation(cloc.clone(), e))?;
            t[entry.i][entry.j][c.k] = field.add(&t[entry.i][entry.j][c.k], &v);
            t[entry.j][entry.i][c.k] = field.sub(&t[entry.j][entry.i][c.k], &v);
        }
    }
    LieAlgebra::new(field, t, file.basis.clone()).map_err(|e| validation(format!("{origin}: table"), e))
}

pub fn lie_from_json(value: &Value, origin: &str) -> Result<AnyLie> {
    let file: LieFile = serde_json::from_value(value.clone()).map_err(|e| schema(origin, e.to_string()))?;
    let field = crate::field::make_field(&file.field).map_err(|e| validation(format!("{origin}: field"), e))?;
    Ok(match field {
        crate::field::AnyField::Rationals(q) => AnyLie::Rational(lie_from_file(&q, &file, origin)?),
        crate::field::AnyField::Finite(f) => AnyLie::Finite(lie_from_file(&f, &file, origin)?),
    })
}

// ---------------------------------------------------------------------------
// Groups

const SZ8: &str = include_str!("../data/sz8.json");

/// Builtin groups of order at most 1000, used by the bulk checks.
pub const SMALL_GROUPS: &[&str] = &[
    "cyclic:6",
    "sym:3",
    "dihedral:4",
    "q8",
    "dihedral:5",
    "alt:4",
    "dihedral:6",
    "sym:3*cyclic:2",
    "sym:4",
    "sl2:3",
    "sym:3*sym:3",
    "dihedral:8",
    "alt:5",
    "sym:5",
    "sl2:5",
    "psl2:7",
    "alt:4*sym:3",
    "alt:5*sym:3",
    "psl2:8",
    "sym:4*sym:4",
];

fn cycle_on(points: impl IntoIterator<Item = usize>) -> String {
    let v: Vec<String> = points.into_iter().map(|p| p.to_string()).collect();
    format!("({})", v.join(" "))
}

fn perm_group(name: &str, degree: usize, gens: &[String], cap: usize) -> Result<FiniteGroup> {
    let keys = gens
        .iter()
        .map(|g| parse_cycles(g, degree))
        .collect::<Result<Vec<Key>>>()?;
    FiniteGroup::generate(name, Repr::Permutation { degree }, keys, cap)
}

fn prime_power(model: &str, q: u32) -> Result<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| bad(model, "q must be at least 2"))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(bad(model, format!("{q} is not a prime power")));
    }
    Ok((p, k))
}

/// SL(n, q), or PSL(n, q) when `projective`, from the transvections
/// I + t^m E_ij.
fn special_linear(name: &str, n: usize, q: u32, projective: bool, cap: usize) -> Result<FiniteGroup> {
    let (p, k) = prime_power(name, q)?;
    let field = FiniteField::with_order(p, k)?;
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for m in 0..k {
                let mut key = vec![0u32; n * n];
                for d in 0..n {
                    key[d * n + d] = 1;
                }
                key[i * n + j] = if k == 1 { 1 } else { field.pow(field.generator_t(), m as u64) };
                gens.push(key);
            }
        }
    }
    let g = FiniteGroup::generate(name, Repr::Matrix { field, n, projective }, gens, cap)?;
    let q = q as u128;
    let mut order: u128 = (0..n as u32).map(|i| q.pow(n as u32) - q.pow(i)).product::<u128>() / (q - 1);
    if projective {
        order /= num_integer::gcd(n as u128, q - 1);
    }
    check_order(name, &g, order)?;
    Ok(g)
}

fn check_order(name: &str, g: &FiniteGroup, expected: u128) -> Result<()> {
    if g.order() as u128 != expected {
        return Err(bad(name, format!("enumerated order {} but expected {expected}", g.order())));
    }
    Ok(())
}

fn parse_param(name: &str, text: &str) -> Result<u32> {
    text.parse().map_err(|_| bad(name, format!("bad parameter {text:?}")))
}

fn atomic_group(name: &str, cap: usize) -> Result<FiniteGroup> {
    if let Some(inner) = name.strip_prefix("wr2(").and_then(|s| s.strip_suffix(')')) {
        let g = builtin_group_capped(inner, cap)?;
        let square = direct_product(&g, &g, cap)?;
        let swap = Automorphism::swap(&square)?;
        let mut w = semidirect_product(&square, &[swap], cap)?;
        w.set_name(name);
        return Ok(w);
    }
    let (base, param) = match name.split_once(':') {
        Some((b, p)) => (b, Some(parse_param(name, p)?)),
        None => (name, None),
    };
    let need = || param.ok_or_else(|| bad(name, "missing parameter"));
    let mut g = match base {
        "sym" | "alt" | "cyclic" | "dihedral" => {
            let n = need()? as usize;
            let min = if base == "dihedral" { 3 } else { 1 };
            if n < min {
                return Err(bad(name, format!("parameter must be at least {min}")));
            }
            let gens: Vec<String> = match base {
                "sym" if n >= 2 => vec!["(1 2)".into(), cycle_on(1..=n)],
                "alt" => (3..=n).map(|k| cycle_on([1, 2, k])).collect(),
                "dihedral" => {
                    let reflection: String = (1..=n / 2).map(|i| cycle_on([i, n + 1 - i])).collect();
                    vec![cycle_on(1..=n), reflection]
                }
                "cyclic" if n >= 2 => vec![cycle_on(1..=n)],
                _ => vec![],
            };
            let g = perm_group(name, n, &gens, cap)?;
            let fact = |m: usize| (1..=m as u128).product::<u128>();
            let expected = match base {
                "sym" => fact(n),
                "alt" => (fact(n) / 2).max(1),
                "dihedral" => 2 * n as u128,
                _ => n as u128,
            };
            check_order(name, &g, expected)?;
            g
        }
        "q8" | "quaternion8" => {
            let field = FiniteField::prime(3)?;
            let gens = vec![vec![0, 2, 1, 0], vec![1, 1, 1, 2]];
            let g = FiniteGroup::generate(name, Repr::Matrix { field, n: 2, projective: false }, gens, cap)?;
            check_order(name, &g, 8)?;
            g
        }
        "sl2" => special_linear(name, 2, need()?, false, cap)?,
        "psl2" => special_linear(name, 2, need()?, true, cap)?,
        "sl3" => special_linear(name, 3, need()?, false, cap)?,
        "psl3" => special_linear(name, 3, need()?, true, cap)?,
        "sz" => {
            if need()? != 8 {
                return Err(bad(name, "only sz:8 is available"));
            }
            let value: Value = serde_json::from_str(SZ8).expect("bundled data parses");
            let g = crate::group::group_from_json_capped(&value, "sz8.json", cap)?;
            check_order(name, &g, 29120)?;
            g
        }
        _ => return Err(bad(name, "unknown group")),
    };
    g.set_name(name);
    Ok(g)
}

/// Splits on `*` outside parentheses.
fn split_product(name: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in name.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                parts.push(&name[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&name[start..]);
    parts
}

pub fn builtin_group(name: &str) -> Result<FiniteGroup> {
    builtin_group_capped(name, crate::group::DEFAULT_ORDER_CAP)
}

pub fn builtin_group_capped(name: &str, cap: usize) -> Result<FiniteGroup> {
    let name = name.trim();
    let parts = split_product(name);
    let mut acc = atomic_group(parts[0].trim(), cap)?;
    for part in &parts[1..] {
        acc = direct_product(&acc, &atomic_group(part.trim(), cap)?, cap)?;
    }
    acc.set_name(name);
    Ok(acc)
}

/// Canonical group file; fails for semidirect products.
pub fn export_group(g: &FiniteGroup) -> Result<Value> {
    let mut v = g.to_json()?;
    v["name"] = json!(g.name());
    Ok(v)
}

/// An ingested model of either kind.
#[derive(Debug, Clone)]
pub enum Model {
    Lie(AnyLie),
    Group(crate::group::FiniteGroup),
}

pub fn ingest(path: &Path) -> Result<Model> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| schema(&origin, e.to_string()))?;
    ingest_str(&text, &origin)
}

pub fn ingest_str(text: &str, origin: &str) -> Result<Model> {
    ingest_str_capped(text, origin, crate::group::DEFAULT_ORDER_CAP)
}

pub fn ingest_capped(path: &Path, cap: usize) -> Result<Model> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| schema(&origin, e.to_string()))?;
    ingest_str_capped(&text, &origin, cap)
}

pub fn ingest_str_capped(text: &str, origin: &str, cap: usize) -> Result<Model> {
    let value: Value = serde_json::from_str(text).map_err(|e| schema(origin, format!("line {}: {e}", e.line())))?;
    if value.get("table").is_some() {
        lie_from_json(&value, origin).map(Model::Lie)
    } else if value.get("representation").is_some() {
        crate::group::group_from_json_capped(&value, origin, cap).map(Model::Group)
    } else {
        Err(schema(origin, "neither a Lie algebra (\"table\") nor a group (\"representation\") file"))
    }
}

/// Pretty canonical text with sorted keys and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
