//! Free-group words, free Lie bracket terms, and the builtin sequence catalog.
//!
//! Conventions:
//! - commutator `[a,b] = a b a^-1 b^-1`;
//! - conjugation used by the `s` sequence is selected by [`ConjConvention`];
//!   the default `Right` means `a^y = y^-1 a y`, so `s^{-y} = y^-1 s^-1 y`.
//!
//! Sequence recursions are written once, generically over [`GroupOps`] /
//! [`BracketOps`], and reused for symbolic words, concrete group elements,
//! exponent-sum bookkeeping, Lie terms and numeric Lie vectors.
//!
//! Autocorrectness is decided by the y-exponent sum. The minimal subgroup of
//! F(x,y) containing every y^k x y^-k is the normal closure of x, which is the
//! kernel of the map F(x,y) -> Z sending x to 0 and y to 1. A word lies in it
//! iff its y-exponent sum vanishes; in that case reading the word left to right
//! while tracking the running y-power k rewrites it as a product of
//! conjugates y^k x^{+-1} y^-k.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Report, Verdict};

pub const DEFAULT_WORD_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    X,
    Y,
    Z,
}

impl Symbol {
    pub fn name(self) -> char {
        match self {
            Symbol::X => 'x',
            Symbol::Y => 'y',
            Symbol::Z => 'z',
        }
    }
}

/// A freely reduced word: adjacent syllables never share a symbol and no
/// exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    syllables: Vec<(Symbol, i32)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord::default()
    }

    pub fn letter(s: Symbol) -> Self {
        GroupWord {
            syllables: vec![(s, 1)],
        }
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = (Symbol, i32)>) -> Self {
        let mut w = GroupWord::identity();
        for (s, e) in syllables {
            w.push(s, e);
        }
        w
    }

    pub fn syllables(&self) -> &[(Symbol, i32)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the sum of |exponent|.
    pub fn len(&self) -> usize {
        self.syllables
            .iter()
            .map(|&(_, e)| e.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    fn push(&mut self, s: Symbol, e: i32) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, le)) if *last == s => {
                *le += e;
                if *le == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((s, e)),
        }
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        let mut out = self.clone();
        for &(s, e) in &other.syllables {
            out.push(s, e);
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            syllables: self.syllables.iter().rev().map(|&(s, e)| (s, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i32) -> GroupWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn commutator(a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    pub fn exponent_sum(&self, symbol: Symbol) -> i64 {
        self.syllables
            .iter()
            .filter(|&&(s, _)| s == symbol)
            .map(|&(_, e)| e as i64)
            .sum()
    }

    /// Homomorphic image under `assignment`, evaluated in `ops`.
    pub fn evaluate<G: GroupOps>(&self, ops: &G, assignment: impl Fn(Symbol) -> G::Elem) -> G::Elem {
        let mut acc = ops.identity();
        for &(s, e) in &self.syllables {
            let base = assignment(s);
            let base = if e < 0 { ops.inv(&base) } else { base };
            for _ in 0..e.unsigned_abs() {
                acc = ops.mul(&acc, &base);
            }
        }
        acc
    }

    /// Rewrites a word with y-exponent sum 0 as conjugates `(k, e)` standing
    /// for y^k x^e y^-k, e = +-1. Returns `None` if the y-sum is nonzero or a
    /// letter other than x, y occurs.
    pub fn conjugate_rewrite(&self) -> Option<Vec<(i64, i8)>> {
        if self.exponent_sum(Symbol::Y) != 0 {
            return None;
        }
        let mut height = 0i64;
        let mut out = Vec::new();
        for &(s, e) in &self.syllables {
            match s {
                Symbol::Y => height += e as i64,
                Symbol::X => {
                    let sign = e.signum() as i8;
                    out.extend(std::iter::repeat_n((height, sign), e.unsigned_abs() as usize));
                }
                Symbol::Z => return None,
            }
        }
        Some(out)
    }

    pub fn from_conjugates(conjugates: &[(i64, i8)]) -> GroupWord {
        let mut w = GroupWord::identity();
        for &(k, e) in conjugates {
            w.push(Symbol::Y, k as i32);
            w.push(Symbol::X, e as i32);
            w.push(Symbol::Y, -k as i32);
        }
        w
    }
}

/// Freely reduces an arbitrary syllable list.
pub fn reduce(syllables: &[(Symbol, i32)]) -> GroupWord {
    GroupWord::from_syllables(syllables.iter().copied())
}

/// Replaces every symbol by a word and reduces.
pub fn substitute(w: &GroupWord, assignment: impl Fn(Symbol) -> GroupWord) -> GroupWord {
    w.evaluate(&FreeGroup, assignment)
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, &(s, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e == 1 {
                write!(f, "{}", s.name())?;
            } else {
                write!(f, "{}^{}", s.name(), e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = WordParser {
            input: s,
            chars: s.char_indices().collect(),
            pos: 0,
        };
        let w = parser.word()?;
        parser.skip_ws();
        if parser.pos != parser.chars.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(w)
    }
}

struct WordParser<'a> {
    input: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl WordParser<'_> {
    fn error(&self, reason: &str) -> Error {
        let at = self.chars.get(self.pos).map_or(self.input.len(), |c| c.0);
        Error::syntax(self.input, format!("{reason} at byte {at}"))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn word(&mut self) -> Result<GroupWord> {
        let mut acc = GroupWord::identity();
        while let Some(c) = self.peek() {
            if c == ',' || c == ']' || c == ')' {
                break;
            }
            let factor = self.factor()?;
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GroupWord> {
        let base = match self.peek() {
            Some('x') => {
                self.pos += 1;
                GroupWord::letter(Symbol::X)
            }
            Some('y') => {
                self.pos += 1;
                GroupWord::letter(Symbol::Y)
            }
            Some('z') => {
                self.pos += 1;
                GroupWord::letter(Symbol::Z)
            }
            Some('1') => {
                self.pos += 1;
                GroupWord::identity()
            }
            Some('[') => {
                self.pos += 1;
                let a = self.word()?;
                if self.peek() != Some(',') {
                    return Err(self.error("expected ','"));
                }
                self.pos += 1;
                let b = self.word()?;
                if self.peek() != Some(']') {
                    return Err(self.error("expected ']'"));
                }
                self.pos += 1;
                GroupWord::commutator(&a, &b)
            }
            Some('(') => {
                self.pos += 1;
                let a = self.word()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                a
            }
            _ => return Err(self.error("expected x, y, z, 1, '[' or '('")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if matches!(self.chars.get(self.pos), Some((_, '-' | '+'))) {
                self.pos += 1;
            }
            while matches!(self.chars.get(self.pos), Some((_, c)) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
            let e: i32 = text.parse().map_err(|_| self.error("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}

// ---------------------------------------------------------------------------
// Lie terms

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LieTerm {
    Leaf(Symbol),
    Bracket(Arc<LieTerm>, Arc<LieTerm>),
}

impl LieTerm {
    pub fn leaf(s: Symbol) -> Arc<LieTerm> {
        Arc::new(LieTerm::Leaf(s))
    }

    pub fn bracket(a: &Arc<LieTerm>, b: &Arc<LieTerm>) -> Arc<LieTerm> {
        Arc::new(LieTerm::Bracket(a.clone(), b.clone()))
    }

    /// Number of leaves of the expanded tree (saturating).
    pub fn leaf_count(&self) -> u64 {
        match self {
            LieTerm::Leaf(_) => 1,
            LieTerm::Bracket(a, b) => a.leaf_count().saturating_add(b.leaf_count()),
        }
    }

    pub fn evaluate<B: BracketOps>(&self, ops: &B, assignment: &impl Fn(Symbol) -> B::Elem) -> B::Elem {
        match self {
            LieTerm::Leaf(s) => assignment(*s),
            LieTerm::Bracket(a, b) => {
                let a = a.evaluate(ops, assignment);
                let b = b.evaluate(ops, assignment);
                ops.bracket(&a, &b)
            }
        }
    }
}

impl fmt::Display for LieTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieTerm::Leaf(s) => write!(f, "{}", s.name()),
            LieTerm::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

// ---------------------------------------------------------------------------
// Abstract operations used by the recursions

pub trait GroupOps {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let abai = self.mul(&ab, &self.inv(a));
        self.mul(&abai, &self.inv(b))
    }

    /// g a g^-1
    fn conjugate(&self, g: &Self::Elem, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, a), &self.inv(g))
    }
}

pub trait BracketOps {
    type Elem: Clone;
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// The free group F(x,y,z) on reduced words.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeGroup;

impl GroupOps for FreeGroup {
    type Elem = GroupWord;
    fn identity(&self) -> GroupWord {
        GroupWord::identity()
    }
    fn mul(&self, a: &GroupWord, b: &GroupWord) -> GroupWord {
        a.mul(b)
    }
    fn inv(&self, a: &GroupWord) -> GroupWord {
        a.inverse()
    }
}

/// The additive group Z; evaluating with x -> 0, y -> 1 computes y-exponent sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegerGroup;

impl GroupOps for IntegerGroup {
    type Elem = i64;
    fn identity(&self) -> i64 {
        0
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn inv(&self, a: &i64) -> i64 {
        -a
    }
}

/// Free Lie terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeLie;

impl BracketOps for FreeLie {
    type Elem = Arc<LieTerm>;
    fn bracket(&self, a: &Arc<LieTerm>, b: &Arc<LieTerm>) -> Arc<LieTerm> {
        LieTerm::bracket(a, b)
    }
}

// ---------------------------------------------------------------------------
// Sequence catalog

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SequenceId {
    #[serde(rename = "e-group")]
    EGroup,
    #[serde(rename = "u-bggkpp")]
    UBggkpp,
    #[serde(rename = "s-bww")]
    SBww,
    #[serde(rename = "w-group")]
    WGroup,
    #[serde(rename = "e-lie")]
    ELie,
    #[serde(rename = "v-lie")]
    VLie,
    #[serde(rename = "w-lie")]
    WLie,
    #[serde(rename = "r-lie")]
    RLie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Group,
    Lie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjConvention {
    /// a^y = y a y^-1
    Left,
    /// a^y = y^-1 a y
    #[default]
    Right,
}

impl FromStr for ConjConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(ConjConvention::Left),
            "right" => Ok(ConjConvention::Right),
            _ => Err(Error::syntax(s, "expected left or right")),
        }
    }
}

impl fmt::Display for ConjConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConjConvention::Left => "left",
            ConjConvention::Right => "right",
        })
    }
}

impl SequenceId {
    pub const ALL: [SequenceId; 8] = [
        SequenceId::EGroup,
        SequenceId::UBggkpp,
        SequenceId::SBww,
        SequenceId::WGroup,
        SequenceId::ELie,
        SequenceId::VLie,
        SequenceId::WLie,
        SequenceId::RLie,
    ];

    pub const GROUP: [SequenceId; 4] = [
        SequenceId::EGroup,
        SequenceId::UBggkpp,
        SequenceId::SBww,
        SequenceId::WGroup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SequenceId::EGroup => "e-group",
            SequenceId::UBggkpp => "u-bggkpp",
            SequenceId::SBww => "s-bww",
            SequenceId::WGroup => "w-group",
            SequenceId::ELie => "e-lie",
            SequenceId::VLie => "v-lie",
            SequenceId::WLie => "w-lie",
            SequenceId::RLie => "r-lie",
        }
    }

    pub fn kind(self) -> SequenceKind {
        match self {
            SequenceId::EGroup | SequenceId::UBggkpp | SequenceId::SBww | SequenceId::WGroup => {
                SequenceKind::Group
            }
            _ => SequenceKind::Lie,
        }
    }

    pub fn arity(self) -> usize {
        if self == SequenceId::RLie {
            3
        } else {
            2
        }
    }

    /// Parses full ids and the short forms accepted on the command line
    /// (`e`, `u`, `s`, `w` resolve to the group sequences, `v` to `v-lie`).
    pub fn parse_with_kind(s: &str, kind: SequenceKind) -> Result<Self> {
        if let Some(id) = Self::ALL.iter().find(|id| id.as_str() == s) {
            return Ok(*id);
        }
        let id = match (s, kind) {
            ("e", SequenceKind::Group) => SequenceId::EGroup,
            ("u", SequenceKind::Group) => SequenceId::UBggkpp,
            ("s", SequenceKind::Group) => SequenceId::SBww,
            ("w", SequenceKind::Group) => SequenceId::WGroup,
            ("e", SequenceKind::Lie) => SequenceId::ELie,
            ("v", _) => SequenceId::VLie,
            ("w", SequenceKind::Lie) => SequenceId::WLie,
            ("r", _) => SequenceId::RLie,
            _ => return Err(Error::UnknownSequence(s.to_string())),
        };
        Ok(id)
    }

    pub fn spec(self) -> SequenceSpec {
        SequenceSpec::new(self)
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownSequence(s.to_string()))
    }
}

/// A builtin sequence. The id fixes everything else; the conjugation
/// convention only affects `s-bww`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub id: SequenceId,
    pub conj: ConjConvention,
}

impl SequenceSpec {
    pub fn new(id: SequenceId) -> Self {
        SequenceSpec {
            id,
            conj: ConjConvention::default(),
        }
    }

    pub fn with_conj(mut self, conj: ConjConvention) -> Self {
        self.conj = conj;
        self
    }

    pub fn kind(&self) -> SequenceKind {
        self.id.kind()
    }

    fn require(&self, kind: SequenceKind) -> Result<()> {
        if self.kind() == kind {
            Ok(())
        } else {
            Err(Error::WrongSequenceKind(self.id.to_string()))
        }
    }

    /// u_1(x, y) in any group.
    pub fn group_seed<G: GroupOps>(&self, ops: &G, x: &G::Elem, y: &G::Elem) -> G::Elem {
        match self.id {
            SequenceId::EGroup | SequenceId::WGroup => ops.commutator(x, y),
            SequenceId::SBww => x.clone(),
            // x^-2 y^-1 x
            SequenceId::UBggkpp => {
                let xi = ops.inv(x);
                ops.mul(&ops.mul(&ops.mul(&xi, &xi), &ops.inv(y)), x)
            }
            _ => unreachable!("not a group sequence"),
        }
    }

    /// u_{n+1} from u_n = `prev`.
    pub fn group_step<G: GroupOps>(&self, ops: &G, prev: &G::Elem, x: &G::Elem, y: &G::Elem) -> G::Elem {
        match self.id {
            SequenceId::EGroup => ops.commutator(prev, y),
            SequenceId::SBww => {
                let inv = ops.inv(prev);
                let conj = match self.conj {
                    ConjConvention::Right => ops.conjugate(&ops.inv(y), &inv),
                    ConjConvention::Left => ops.conjugate(y, &inv),
                };
                ops.commutator(&conj, prev)
            }
            SequenceId::WGroup => ops.commutator(&ops.commutator(prev, x), &ops.commutator(prev, y)),
            SequenceId::UBggkpp => ops.commutator(&ops.conjugate(x, prev), &ops.conjugate(y, prev)),
            _ => unreachable!("not a group sequence"),
        }
    }

    /// u_n(x, y) by iterating the recursion; `n >= 1`.
    pub fn group_value<G: GroupOps>(&self, ops: &G, x: &G::Elem, y: &G::Elem, n: usize) -> G::Elem {
        let mut cur = self.group_seed(ops, x, y);
        for _ in 1..n {
            cur = self.group_step(ops, &cur, x, y);
        }
        cur
    }

    /// The recursion rule as a word in x, y and z = previous term.
    pub fn rule_word(&self) -> Result<GroupWord> {
        self.require(SequenceKind::Group)?;
        Ok(self.group_step(
            &FreeGroup,
            &GroupWord::letter(Symbol::Z),
            &GroupWord::letter(Symbol::X),
            &GroupWord::letter(Symbol::Y),
        ))
    }

    /// Seed of a Lie sequence; `z` is only used by `r-lie`.
    pub fn lie_seed<B: BracketOps>(&self, ops: &B, x: &B::Elem, y: &B::Elem, z: Option<&B::Elem>) -> B::Elem {
        match self.id {
            SequenceId::ELie | SequenceId::WLie => ops.bracket(x, y),
            SequenceId::VLie => x.clone(),
            SequenceId::RLie => ops.bracket(z.expect("r-lie needs z"), &ops.bracket(x, y)),
            _ => unreachable!("not a Lie sequence"),
        }
    }

    /// One step of a Lie recursion. `t` is the cached value of [x,y].
    pub fn lie_step<B: BracketOps>(&self, ops: &B, prev: &B::Elem, x: &B::Elem, y: &B::Elem, t: &B::Elem) -> B::Elem {
        match self.id {
            SequenceId::ELie => ops.bracket(prev, y),
            SequenceId::VLie | SequenceId::RLie => ops.bracket(prev, t),
            SequenceId::WLie => ops.bracket(&ops.bracket(prev, x), &ops.bracket(prev, y)),
            _ => unreachable!("not a Lie sequence"),
        }
    }

    pub fn lie_value<B: BracketOps>(&self, ops: &B, x: &B::Elem, y: &B::Elem, z: Option<&B::Elem>, n: usize) -> B::Elem {
        let t = ops.bracket(x, y);
        let mut cur = self.lie_seed(ops, x, y, z);
        for _ in 1..n {
            cur = self.lie_step(ops, &cur, x, y, &t);
        }
        cur
    }
}

/// Output of [`generate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceTerm {
    Group(GroupWord),
    Lie(Arc<LieTerm>),
}

impl fmt::Display for SequenceTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceTerm::Group(w) => write!(f, "{w}"),
            SequenceTerm::Lie(t) => write!(f, "{t}"),
        }
    }
}

/// The n-th term of a builtin sequence as a reduced word or a bracket term.
pub fn generate(seq: &SequenceSpec, n: usize, cap: usize) -> Result<SequenceTerm> {
    assert!(n >= 1, "sequences are indexed from 1");
    let x = GroupWord::letter(Symbol::X);
    let y = GroupWord::letter(Symbol::Y);
    match seq.kind() {
        SequenceKind::Group => {
            let mut cur = seq.group_seed(&FreeGroup, &x, &y);
            for _ in 1..n {
                if cur.len() > cap {
                    return Err(Error::WordTooLarge { len: cur.len(), cap });
                }
                cur = seq.group_step(&FreeGroup, &cur, &x, &y);
            }
            if cur.len() > cap {
                return Err(Error::WordTooLarge { len: cur.len(), cap });
            }
            Ok(SequenceTerm::Group(cur))
        }
        SequenceKind::Lie => {
            let lx = LieTerm::leaf(Symbol::X);
            let ly = LieTerm::leaf(Symbol::Y);
            let lz = LieTerm::leaf(Symbol::Z);
            Ok(SequenceTerm::Lie(seq.lie_value(&FreeLie, &lx, &ly, Some(&lz), n)))
        }
    }
}

pub fn exponent_sum(w: &GroupWord, symbol: Symbol) -> i64 {
    w.exponent_sum(symbol)
}

/// Thresholds n0 for the substitutions x -> 1 and y -> 1, plus the syntactic
/// stability check phi(1, x, y) = 1 of the recursion rule.
pub fn check_correct(seq: &SequenceSpec, n_max: usize) -> Result<Report> {
    seq.require(SequenceKind::Group)?;
    let x = GroupWord::letter(Symbol::X);
    let y = GroupWord::letter(Symbol::Y);
    let one = GroupWord::identity();

    // Evaluating the recursion with a trivial argument keeps words tiny,
    // unlike substituting into the fully expanded u_n.
    let threshold = |a: &GroupWord, g: &GroupWord| -> Option<usize> {
        let mut trivial = Vec::with_capacity(n_max);
        let mut cur = seq.group_seed(&FreeGroup, a, g);
        for n in 1..=n_max {
            if n > 1 {
                cur = seq.group_step(&FreeGroup, &cur, a, g);
            }
            trivial.push(cur.is_identity());
        }
        // least n0 with every n in n0..=n_max trivial
        let mut n0 = None;
        for n in (1..=n_max).rev() {
            if trivial[n - 1] {
                n0 = Some(n);
            } else {
                break;
            }
        }
        n0
    };
    let n0_y = threshold(&x, &one);
    let n0_x = threshold(&one, &y);
    let rule = seq.rule_word()?;
    let stable = substitute(&rule, |s| match s {
        Symbol::Z => GroupWord::identity(),
        other => GroupWord::letter(other),
    });

    let (Some(n0_x), Some(n0_y)) = (n0_x, n0_y) else {
        return Err(Error::NotSatisfiedWithinBound(n_max));
    };
    if !stable.is_identity() {
        return Err(Error::NotSatisfiedWithinBound(n_max));
    }
    let mut report = Report::new("def-correct", Verdict::Holds);
    report.inputs = serde_json::json!({ "seq": seq.id, "n_max": n_max, "conj": seq.conj });
    report.details = serde_json::json!({
        "n0_x_to_1": n0_x,
        "n0_y_to_1": n0_y,
        "n0": n0_x.max(n0_y),
        "rule": rule.to_string(),
        "rule_at_z_eq_1": stable.to_string(),
    });
    report.iterations = n_max as u64;
    Ok(report)
}

/// Per-n verdicts of the y-exponent-sum criterion, with conjugate rewrites for
/// every u_n whose expanded word fits under `cap`.
#[derive(Debug, Clone, Serialize)]
pub struct AutocorrectStep {
    pub n: usize,
    pub y_exponent_sum: i64,
    pub autocorrect: bool,
    /// Number of conjugates in the rewrite; `None` when the word exceeds the cap.
    pub conjugates: Option<usize>,
    /// The rewrite multiplies back to u_n.
    pub rewrite_verified: Option<bool>,
}

pub fn autocorrect_steps(seq: &SequenceSpec, n_max: usize, cap: usize) -> Result<Vec<AutocorrectStep>> {
    seq.require(SequenceKind::Group)?;
    let x = GroupWord::letter(Symbol::X);
    let y = GroupWord::letter(Symbol::Y);
    let mut sum = seq.group_seed(&IntegerGroup, &0, &1);
    let mut word = Some(seq.group_seed(&FreeGroup, &x, &y));
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            sum = seq.group_step(&IntegerGroup, &sum, &0, &1);
            word = match word {
                Some(w) if w.len() <= cap => Some(seq.group_step(&FreeGroup, &w, &x, &y)),
                _ => None,
            };
            if word.as_ref().is_some_and(|w| w.len() > cap) {
                word = None;
            }
        }
        if let Some(w) = &word {
            debug_assert_eq!(w.exponent_sum(Symbol::Y), sum);
        }
        let (conjugates, verified) = match (&word, sum == 0) {
            (Some(w), true) => {
                let rw = w.conjugate_rewrite().expect("y-sum is zero");
                let ok = GroupWord::from_conjugates(&rw) == *w;
                (Some(rw.len()), Some(ok))
            }
            _ => (None, None),
        };
        out.push(AutocorrectStep {
            n,
            y_exponent_sum: sum,
            autocorrect: sum == 0,
            conjugates,
            rewrite_verified: verified,
        });
    }
    Ok(out)
}

pub fn check_autocorrect(seq: &SequenceSpec, n_max: usize) -> Result<Report> {
    let steps = autocorrect_steps(seq, n_max, DEFAULT_WORD_CAP)?;
    let first_fail = steps.iter().find(|s| !s.autocorrect).map(|s| s.n);
    let verdict = if first_fail.is_some() {
        Verdict::Fails
    } else {
        Verdict::Holds
    };
    let mut report = Report::new("def-autocorrect", verdict);
    report.inputs = serde_json::json!({ "seq": seq.id, "n_max": n_max, "conj": seq.conj });
    if let Some(n) = first_fail {
        report.witness = Some(serde_json::json!({
            "n": n,
            "y_exponent_sum": steps[n - 1].y_exponent_sum,
        }));
    }
    report.details = serde_json::to_value(&steps).expect("serializable");
    report.iterations = n_max as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w("x y y^-1 x^-1").is_identity());
        assert_eq!(w("x^2 x^-1 y"), w("x y"));
        // e_1 with y := 1
        let e1 = w("[x,y]");
        let sub = substitute(&e1, |s| match s {
            Symbol::Y => GroupWord::identity(),
            o => GroupWord::letter(o),
        });
        assert!(sub.is_identity());
        assert!(reduce(&[(Symbol::X, 1), (Symbol::Y, 0), (Symbol::X, -1)]).is_identity());
    }

    #[test]
    fn substitute_examples() {
        let u1 = w("x^-2 y^-1 x");
        let sub = substitute(&u1, |s| match s {
            Symbol::Y => GroupWord::identity(),
            o => GroupWord::letter(o),
        });
        assert_eq!(sub, w("x^-1"));
        // u_1 = x y^-1 of the nilpotent-by-two example, x -> xy, y -> yx, gives [x,y]
        let nb2 = w("x y^-1");
        let sub = substitute(&nb2, |s| match s {
            Symbol::X => w("x y"),
            Symbol::Y => w("y x"),
            o => GroupWord::letter(o),
        });
        assert_eq!(sub, w("[x,y]"));
    }

    #[test]
    fn generate_examples() {
        let cap = DEFAULT_WORD_CAP;
        assert_eq!(
            generate(&SequenceId::SBww.spec(), 1, cap).unwrap(),
            SequenceTerm::Group(w("x"))
        );
        assert_eq!(
            generate(&SequenceId::UBggkpp.spec(), 1, cap).unwrap(),
            SequenceTerm::Group(w("x^-2 y^-1 x"))
        );
        assert_eq!(
            generate(&SequenceId::VLie.spec(), 2, cap).unwrap().to_string(),
            "[x,[x,y]]"
        );
        assert_eq!(
            generate(&SequenceId::EGroup.spec(), 2, cap).unwrap(),
            SequenceTerm::Group(w("[[x,y],y]"))
        );
        assert_eq!(
            generate(&SequenceId::RLie.spec(), 2, cap).unwrap().to_string(),
            "[[z,[x,y]],[x,y]]"
        );
        assert!(matches!(
            generate(&SequenceId::WGroup.spec(), 12, cap),
            Err(Error::WordTooLarge { .. })
        ));
    }

    #[test]
    fn generate_follows_rule() {
        for id in SequenceId::GROUP {
            let seq = id.spec();
            let rule = seq.rule_word().unwrap();
            for n in 1..5 {
                let SequenceTerm::Group(a) = generate(&seq, n, DEFAULT_WORD_CAP).unwrap() else {
                    unreachable!()
                };
                let SequenceTerm::Group(b) = generate(&seq, n + 1, DEFAULT_WORD_CAP).unwrap() else {
                    unreachable!()
                };
                let via_rule = substitute(&rule, |s| match s {
                    Symbol::Z => a.clone(),
                    o => GroupWord::letter(o),
                });
                assert_eq!(via_rule, b, "{id} n={n}");
            }
        }
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(exponent_sum(&w("[x,y]"), Symbol::Y), 0);
        assert_eq!(exponent_sum(&w("x^-2 y^-1 x"), Symbol::Y), -1);
        let SequenceTerm::Group(s2) = generate(&SequenceId::SBww.spec(), 2, DEFAULT_WORD_CAP).unwrap() else {
            unreachable!()
        };
        assert_eq!(s2, w("y^-1 x^-1 y x y^-1 x y x^-1"));
        assert_eq!(exponent_sum(&s2, Symbol::Y), 0);
    }

    #[test]
    fn s_conventions_differ() {
        let right = generate(&SequenceId::SBww.spec(), 2, 100).unwrap();
        let left = generate(&SequenceId::SBww.spec().with_conj(ConjConvention::Left), 2, 100).unwrap();
        assert_ne!(right, left);
        assert_eq!(left, SequenceTerm::Group(w("y x^-1 y^-1 x y x y^-1 x^-1")));
    }

    #[test]
    fn correctness_thresholds() {
        let r = check_correct(&SequenceId::EGroup.spec(), 10).unwrap();
        assert_eq!(r.details["n0_x_to_1"], 1);
        assert_eq!(r.details["n0_y_to_1"], 1);
        assert_eq!(r.details["rule_at_z_eq_1"], "1");
        let r = check_correct(&SequenceId::SBww.spec(), 10).unwrap();
        assert_eq!(r.details["n0_x_to_1"], 1);
        assert_eq!(r.details["n0_y_to_1"], 2);
        let r = check_correct(&SequenceId::UBggkpp.spec(), 10).unwrap();
        assert_eq!(r.details["n0_x_to_1"], 2);
        assert_eq!(r.details["n0_y_to_1"], 2);
        let r = check_correct(&SequenceId::WGroup.spec(), 10).unwrap();
        assert_eq!(r.details["n0"], 1);
        assert!(check_correct(&SequenceId::VLie.spec(), 3).is_err());
    }

    #[test]
    fn autocorrect_verdicts() {
        for id in [SequenceId::EGroup, SequenceId::WGroup, SequenceId::SBww] {
            let r = check_autocorrect(&id.spec(), 10).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "{id}");
        }
        let r = check_autocorrect(&SequenceId::UBggkpp.spec(), 1).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witness.unwrap()["y_exponent_sum"], -1);
        let steps = autocorrect_steps(&SequenceId::WGroup.spec(), 10, 100_000).unwrap();
        assert!(steps[0].rewrite_verified == Some(true));
        assert!(steps[9].conjugates.is_none());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("x^".parse::<GroupWord>(), Err(Error::SyntaxError { .. })));
        assert!(matches!("[x,y".parse::<GroupWord>(), Err(Error::SyntaxError { .. })));
        assert!(matches!("q".parse::<GroupWord>(), Err(Error::SyntaxError { .. })));
        assert_eq!(w("1"), GroupWord::identity());
        assert_eq!(w("(x y)^-1"), w("y^-1 x^-1"));
    }
}
