//! Coxeter systems: configuration parsing, the word problem, ball
//! enumeration, spherical subsets and minimal coset representatives.
//!
//! The word problem is solved with the geometric (Tits) representation.
//! `s` is a left descent of `w` exactly when `w⁻¹(α_s)` is a negative root,
//! so the ShortLex-least reduced word of `w` is read off by repeatedly
//! stripping the smallest left descent. Right-angled systems take a faster
//! commutation-based route.

mod ball;
mod classify;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::numfield::Surd;
use crate::{Error, Result};

pub use ball::Ball;
pub use classify::{FiniteType, SphericalSubset};

/// Coxeter matrix entry standing for `m = ∞`.
pub const INFINITY: u32 = 0;

/// Tolerance used by the floating descent test for labels outside {2,…,6}.
pub const APPROX_TOLERANCE: f64 = 1e-9;

/// A subset of the generating set, as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GenSet(pub u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn from_indices(indices: &[usize]) -> Self {
        GenSet(indices.iter().fold(0, |m, &i| m | 1 << i))
    }

    pub fn singleton(i: usize) -> Self {
        GenSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(self, i: usize) -> GenSet {
        GenSet(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> GenSet {
        GenSet(self.0 & !(1 << i))
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Position of `i` among the sorted members.
    pub fn position(self, i: usize) -> usize {
        (self.0 & ((1u64 << i) - 1)).count_ones() as usize
    }
}

/// Group element stored as its ShortLex-least reduced word.
///
/// Ordering is ShortLex: by length, then lexicographically by generator
/// index.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct GroupElement {
    word: Vec<u8>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Vec::new() }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Word length `d(w)`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.word.iter().map(|&s| s as usize)
    }

    /// Wraps a word that is already known to be in normal form.
    pub(crate) fn from_normal_word(word: Vec<u8>) -> Self {
        GroupElement { word }
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        let s: Vec<String> = self.word.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", s.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArithmeticMode {
    /// All finite labels lie in {2,…,6}; descent tests are exact.
    Exact,
    /// Some finite label exceeds 6; descent tests are floating with a
    /// tolerance and fail loudly when inconclusive.
    Approximate,
}

#[derive(Clone, Debug)]
enum Form {
    Exact(Vec<Vec<Surd>>),
    Approx(Vec<Vec<f64>>),
}

/// A Coxeter system `(W, S)` given by its Coxeter matrix.
#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    labels: Vec<String>,
    matrix: Vec<Vec<u32>>,
    mode: ArithmeticMode,
    right_angled: bool,
    /// `K[s][t] = -2 cos(π / m_st)`; the reflection is `σ_s(α_t) = α_t - K[s][t] α_s`.
    form: Form,
}

#[derive(Serialize)]
struct SystemDocument<'a> {
    generators: &'a [String],
    matrix: Vec<Vec<Value>>,
}

impl CoxeterSystem {
    /// Builds and validates a system. `INFINITY` (0) encodes `m = ∞`.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("no generators".into()));
        }
        if n > 63 {
            return Err(Error::InvalidMatrix(format!("rank {n} exceeds 63")));
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMatrix(format!("matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if matrix[i][i] != 1 {
                return Err(Error::InvalidMatrix(format!("diagonal entry ({i},{i}) must be 1")));
            }
            for j in 0..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::InvalidMatrix(format!("asymmetric at ({i},{j})")));
                }
                if i != j && matrix[i][j] != INFINITY && matrix[i][j] < 2 {
                    return Err(Error::InvalidMatrix(format!(
                        "off-diagonal entry ({i},{j}) = {} must be >= 2",
                        matrix[i][j]
                    )));
                }
            }
        }
        let exact = matrix.iter().flatten().all(|&m| m <= 6);
        let right_angled = (0..n).all(|i| (0..n).all(|j| i == j || matches!(matrix[i][j], 2 | INFINITY)));
        let form = if exact {
            Form::Exact(
                matrix
                    .iter()
                    .map(|row| row.iter().map(|&m| Surd::minus_two_cos_pi_over(m).unwrap()).collect())
                    .collect(),
            )
        } else {
            Form::Approx(
                matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|&m| match m {
                                INFINITY => -2.0,
                                m => -2.0 * (std::f64::consts::PI / m as f64).cos(),
                            })
                            .collect()
                    })
                    .collect(),
            )
        };
        Ok(CoxeterSystem {
            labels,
            matrix,
            mode: if exact { ArithmeticMode::Exact } else { ArithmeticMode::Approximate },
            right_angled,
            form,
        })
    }

    /// Parses the JSON configuration `{ "generators": [...], "matrix": [[...]] }`
    /// where `m = ∞` is written `0` or `"inf"`.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let gens = doc
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"generators\" array".into()))?;
        let labels = gens
            .iter()
            .map(|g| g.as_str().map(str::to_owned).ok_or_else(|| Error::Parse("generator names must be strings".into())))
            .collect::<Result<Vec<_>>>()?;
        let rows = doc
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"matrix\" array".into()))?;
        let matrix = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?
                    .iter()
                    .map(parse_entry)
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CoxeterSystem::new(labels, matrix)
    }

    /// Serializes back to the configuration format (∞ written as `"inf"`).
    pub fn to_json(&self) -> String {
        let doc = SystemDocument {
            generators: &self.labels,
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|&m| if m == INFINITY { Value::from("inf") } else { Value::from(m) }).collect())
                .collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    /// Content hash of the Coxeter matrix (hex SHA-256, first 16 chars).
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        for row in &self.matrix {
            for m in row {
                h.update(m.to_le_bytes());
            }
            h.update(b";");
        }
        hex::encode(h.finalize())[..16].to_string()
    }

    /// Right-angled system on `n` generators where `i`,`j` commute exactly
    /// when `{i, j}` is an edge.
    pub fn right_angled(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut m = vec![vec![INFINITY; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(a, b) in edges {
            m[a][b] = 2;
            m[b][a] = 2;
        }
        let labels = (0..n).map(default_label).collect();
        CoxeterSystem::new(labels, m)
    }

    /// The infinite dihedral group.
    pub fn infinite_dihedral() -> Self {
        CoxeterSystem::new(vec!["s".into(), "u".into()], vec![vec![1, INFINITY], vec![INFINITY, 1]]).unwrap()
    }

    /// Dihedral group of order `2m` (`m = INFINITY` gives D_∞).
    pub fn dihedral(m: u32) -> Self {
        CoxeterSystem::new(vec!["s".into(), "u".into()], vec![vec![1, m], vec![m, 1]]).unwrap()
    }

    /// Right-angled system whose commutation graph is the `n`-cycle.
    pub fn right_angled_cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        CoxeterSystem::right_angled(n, &edges).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.matrix[s][t]
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.mode
    }

    pub fn is_right_angled(&self) -> bool {
        self.right_angled
    }

    pub fn commute(&self, s: usize, t: usize) -> bool {
        s == t || self.matrix[s][t] == 2
    }

    pub fn all_generators(&self) -> GenSet {
        GenSet((1u64 << self.rank()) - 1)
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&s| s >= self.rank()) {
            Some(&index) => Err(Error::GeneratorOutOfRange { index, rank: self.rank() }),
            None => Ok(()),
        }
    }

    /// ShortLex-least reduced word of the element represented by `word`.
    pub fn normal_form(&self, word: &[usize]) -> Result<GroupElement> {
        self.check_word(word)?;
        if self.right_angled {
            return Ok(self.right_angled_normal_form(word));
        }
        self.reflection_normal_form(word)
    }

    /// Normal form via the reflection representation, ignoring the
    /// right-angled shortcut. Exposed for cross-checking the two routes.
    pub fn reflection_normal_form(&self, word: &[usize]) -> Result<GroupElement> {
        self.check_word(word)?;
        match &self.form {
            Form::Exact(k) => descent_normal_form(k, word, |col| Ok(exact_root_sign(col))),
            Form::Approx(k) => descent_normal_form(k, word, approx_root_sign),
        }
    }

    fn right_angled_normal_form(&self, word: &[usize]) -> GroupElement {
        let mut reduced: Vec<u8> = Vec::with_capacity(word.len());
        for &s in word {
            self.ra_push(&mut reduced, s as u8);
        }
        GroupElement::from_normal_word(self.ra_lex_order(reduced))
    }

    /// Appends `s` to a reduced right-angled word, cancelling when `s` can be
    /// shuffled back onto an equal letter.
    fn ra_push(&self, reduced: &mut Vec<u8>, s: u8) {
        let mut idx = reduced.len();
        while idx > 0 {
            let x = reduced[idx - 1];
            if x == s {
                reduced.remove(idx - 1);
                return;
            }
            if self.matrix[x as usize][s as usize] == 2 {
                idx -= 1;
            } else {
                break;
            }
        }
        reduced.push(s);
    }

    /// Lexicographically least reordering of a reduced right-angled word
    /// within its commutation class.
    fn ra_lex_order(&self, mut rest: Vec<u8>) -> Vec<u8> {
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..rest.len() {
                let c = rest[i];
                if best.is_some_and(|b| rest[b] <= c) {
                    continue;
                }
                if rest[..i].iter().all(|&x| self.matrix[x as usize][c as usize] == 2) {
                    best = Some(i);
                }
            }
            out.push(rest.remove(best.expect("some letter is always initial")));
        }
        out
    }

    /// `w·s` together with whether the length went up.
    pub fn mul_gen(&self, w: &GroupElement, s: usize) -> Result<(GroupElement, bool)> {
        if s >= self.rank() {
            return Err(Error::GeneratorOutOfRange { index: s, rank: self.rank() });
        }
        if self.right_angled {
            let mut reduced = w.word.clone();
            self.ra_push(&mut reduced, s as u8);
            let longer = reduced.len() > w.len();
            return Ok((GroupElement::from_normal_word(self.ra_lex_order(reduced)), longer));
        }
        let mut word: Vec<usize> = w.letters().collect();
        word.push(s);
        let v = self.reflection_normal_form(&word)?;
        let longer = v.len() > w.len();
        Ok((v, longer))
    }

    /// `s·w` together with whether the length went up.
    pub fn gen_mul(&self, s: usize, w: &GroupElement) -> Result<(GroupElement, bool)> {
        let mut word = vec![s];
        word.extend(w.letters());
        let v = self.normal_form(&word)?;
        let longer = v.len() > w.len();
        Ok((v, longer))
    }

    /// True when `d(ws) < d(w)`.
    pub fn is_right_descent(&self, w: &GroupElement, s: usize) -> Result<bool> {
        Ok(!self.mul_gen(w, s)?.1)
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let mut word: Vec<usize> = a.letters().collect();
        word.extend(b.letters());
        self.normal_form(&word)
    }

    pub fn inverse(&self, w: &GroupElement) -> Result<GroupElement> {
        let word: Vec<usize> = w.word().iter().rev().map(|&s| s as usize).collect();
        self.normal_form(&word)
    }

    /// The unique element of minimal length in `w W_T`.
    pub fn min_coset_rep(&self, w: &GroupElement, t: GenSet) -> Result<GroupElement> {
        Ok(self.coset_decompose(w, t)?.0)
    }

    /// Writes `w = rep · u` with `rep` T-reduced and `u ∈ W_T`.
    pub fn coset_decompose(&self, w: &GroupElement, t: GenSet) -> Result<(GroupElement, GroupElement)> {
        let mut rep = w.clone();
        let mut u_rev: Vec<usize> = Vec::new();
        'outer: loop {
            for s in t.iter() {
                let (ws, longer) = self.mul_gen(&rep, s)?;
                if !longer {
                    rep = ws;
                    u_rev.push(s);
                    continue 'outer;
                }
            }
            break;
        }
        u_rev.reverse();
        let u = self.normal_form(&u_rev)?;
        Ok((rep, u))
    }

    /// All elements of the finite parabolic `W_T`, in ShortLex order.
    pub fn parabolic_elements(&self, t: GenSet) -> Result<Vec<GroupElement>> {
        let mut all = vec![GroupElement::identity()];
        let mut frontier = vec![GroupElement::identity()];
        let mut seen: std::collections::HashSet<GroupElement> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = std::collections::BTreeSet::new();
            for w in &frontier {
                for s in t.iter() {
                    let (ws, longer) = self.mul_gen(w, s)?;
                    if longer && !seen.contains(&ws) {
                        next.insert(ws);
                    }
                }
            }
            if seen.len() + next.len() > 1_000_000 {
                return Err(Error::ResourceCap("parabolic subgroup larger than 10^6 elements".into()));
            }
            frontier = next.into_iter().collect();
            for w in &frontier {
                seen.insert(w.clone());
            }
            all.extend(frontier.iter().cloned());
        }
        Ok(all)
    }

    pub fn format_element(&self, w: &GroupElement) -> String {
        if w.is_identity() {
            return "e".into();
        }
        w.letters().map(|s| self.labels[s].as_str()).collect::<Vec<_>>().join(" ")
    }
}

fn default_label(i: usize) -> String {
    const NAMES: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if i < NAMES.len() {
        (NAMES[i] as char).to_string()
    } else {
        format!("g{i}")
    }
}

fn parse_entry(v: &Value) -> Result<u32> {
    match v {
        Value::Number(n) => {
            let m = n.as_u64().ok_or_else(|| Error::Parse(format!("matrix entry {n} is not a non-negative integer")))?;
            u32::try_from(m).map_err(|_| Error::Parse(format!("matrix entry {m} too large")))
        }
        Value::String(s) if matches!(s.as_str(), "inf" | "∞" | "infinity") => Ok(INFINITY),
        other => Err(Error::Parse(format!("invalid matrix entry {other}"))),
    }
}

trait FormEntry: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn axpy(&self, k: &Self, x: &Self) -> Self; // self - k*x
}

impl FormEntry for Surd {
    fn zero() -> Self {
        Surd::zero()
    }
    fn one() -> Self {
        Surd::one()
    }
    fn axpy(&self, k: &Self, x: &Self) -> Self {
        if k.is_zero() || x.is_zero() {
            return self.clone();
        }
        self.sub(&k.mul(x))
    }
}

impl FormEntry for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn axpy(&self, k: &Self, x: &Self) -> Self {
        self - k * x
    }
}

/// Right-multiplies the column matrix `n` (columns = images of simple roots)
/// by the reflection `σ_s`.
fn right_mul_reflection<E: FormEntry>(n: &mut [Vec<E>], k: &[Vec<E>], s: usize) {
    let rank = k.len();
    let col_s: Vec<E> = (0..rank).map(|r| n[r][s].clone()).collect();
    for j in 0..rank {
        for r in 0..rank {
            n[r][j] = n[r][j].axpy(&k[s][j], &col_s[r]);
        }
    }
}

fn descent_normal_form<E: FormEntry>(
    k: &[Vec<E>],
    word: &[usize],
    is_negative: impl Fn(&[E]) -> Result<bool>,
) -> Result<GroupElement> {
    let rank = k.len();
    // n holds the matrix of w⁻¹ in the basis of simple roots
    let mut n: Vec<Vec<E>> = (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { E::one() } else { E::zero() }).collect())
        .collect();
    for &s in word.iter().rev() {
        right_mul_reflection(&mut n, k, s);
    }
    let mut out = Vec::new();
    loop {
        let mut found = None;
        for s in 0..rank {
            let col: Vec<E> = (0..rank).map(|r| n[r][s].clone()).collect();
            if is_negative(&col)? {
                found = Some(s);
                break;
            }
        }
        match found {
            Some(s) => {
                out.push(s as u8);
                right_mul_reflection(&mut n, k, s);
            }
            None => break,
        }
        if out.len() > word.len() {
            unreachable!("normal form longer than input word");
        }
    }
    Ok(GroupElement::from_normal_word(out))
}

/// A root has all coordinates of one sign; the first nonzero one decides.
fn exact_root_sign(col: &[Surd]) -> bool {
    col.iter().find(|c| !c.is_zero()).is_some_and(Surd::is_negative)
}

fn approx_root_sign(col: &[f64]) -> Result<bool> {
    let (mut max_pos, mut max_neg) = (0.0f64, 0.0f64);
    for &c in col {
        if c > 0.0 {
            max_pos = max_pos.max(c);
        } else {
            max_neg = max_neg.max(-c);
        }
    }
    let big = max_pos.max(max_neg);
    if big < APPROX_TOLERANCE || (max_pos > APPROX_TOLERANCE && max_neg > APPROX_TOLERANCE) {
        return Err(Error::InconclusiveDescent { magnitude: max_pos.min(max_neg).max(big.min(APPROX_TOLERANCE)) });
    }
    Ok(max_neg > max_pos)
}

#[cfg(test)]
mod tests;
