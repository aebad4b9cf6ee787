//! Symbolic automorphisms of matrix groups: inner conjugations, the
//! transpose-inverse map, conjugation by the fixed sign and swap matrices,
//! scalar character twists, and compositions of these.
//!
//! An automorphism is a chain of primitives applied right-to-left. The same
//! symbolic description acts on exact integer matrices and on mod-m matrices;
//! `induced_mod` connects the two levels so certificates can move between
//! them. Nothing here is trusted blindly: `validate_automorphism` checks
//! closure, multiplicativity, and bijectivity on a concrete finite group and
//! reports what it found.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;
use crate::matrix::{number_to_bigint, IntMatrix, ModMatrix, SquareMatrix};
use crate::sampling::rng_from_seed;
use rand::Rng;

const FULL_PAIR_LIMIT: usize = 2000;
const SAMPLED_PAIRS: usize = 100_000;

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

/// A homomorphism-shaped map from matrices to {+1, -1}. Whether it really is
/// multiplicative on a given group is checked by validation, not assumed.
#[derive(Clone, Debug)]
pub enum Character<M: SquareMatrix> {
    /// Sign of the determinant; defined exactly on matrices of unit
    /// determinant (mod m: det in {1, m-1}).
    DetSign,
    /// Explicit lookup table.
    Table(CharacterTable<M>),
}

impl<M: SquareMatrix> Character<M> {
    pub fn eval(&self, x: &M) -> Result<i8> {
        match self {
            Character::DetSign => x.det_sign().ok_or_else(|| {
                Error::InvalidInput("determinant is not a sign, character undefined".into())
            }),
            Character::Table(t) => t.eval(x),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CharacterTable<M: SquareMatrix> {
    entries: Vec<(M, i8)>,
    index: HashMap<M::Key, i8>,
}

impl<M: SquareMatrix> CharacterTable<M> {
    pub fn new(pairs: Vec<(M, i8)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (mat, sign) in &pairs {
            if *sign != 1 && *sign != -1 {
                return Err(Error::InvalidInput(format!(
                    "character values must be +1 or -1, got {sign}"
                )));
            }
            if let Some(prev) = index.insert(mat.canonical_key(), *sign) {
                if prev != *sign {
                    return Err(Error::InvalidInput(
                        "character table assigns conflicting signs to one matrix".into(),
                    ));
                }
            }
        }
        Ok(Self { entries: pairs, index })
    }

    pub fn eval(&self, x: &M) -> Result<i8> {
        self.index
            .get(&x.canonical_key())
            .copied()
            .ok_or_else(|| Error::InvalidInput("character table does not cover this element".into()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Primitives and chains
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum Primitive<M: SquareMatrix> {
    /// x -> M x M^{-1}; the inverse is fixed at construction time.
    Inner { mat: M, inv: M },
    /// x -> (x^{-1})^T = (x^T)^{-1}.
    TransposeInverse,
    /// x -> J x J with J = diag(1, ..., 1, -1); J is its own inverse.
    ConjBySign,
    /// x -> J' x J' with J' = diag([[0,1],[1,0]], I); J' is its own inverse.
    ConjBySwap,
    /// x -> chi(x) * x.
    CharacterTwist(Character<M>),
}

impl<M: SquareMatrix> Primitive<M> {
    fn apply(&self, x: &M) -> Result<M> {
        match self {
            Primitive::Inner { mat, inv } => mat.mat_mul(x)?.mat_mul(inv),
            Primitive::TransposeInverse => Ok(x.inverse()?.transpose()),
            Primitive::ConjBySign => {
                let j = x.sign_conjugator_like();
                j.mat_mul(x)?.mat_mul(&j)
            }
            Primitive::ConjBySwap => {
                let j = x.swap_conjugator_like()?;
                j.mat_mul(x)?.mat_mul(&j)
            }
            Primitive::CharacterTwist(chi) => {
                if chi.eval(x)? == 1 {
                    Ok(x.clone())
                } else {
                    Ok(x.negate())
                }
            }
        }
    }

    fn token(&self) -> &'static str {
        match self {
            Primitive::Inner { .. } => "inner",
            Primitive::TransposeInverse => "tau",
            Primitive::ConjBySign => "sigma",
            Primitive::ConjBySwap => "theta",
            Primitive::CharacterTwist(Character::DetSign) => "chartwist:detsign",
            Primitive::CharacterTwist(Character::Table(_)) => "chartwist:table",
        }
    }
}

/// A composition chain of primitive maps, stored outermost first, so the
/// chain reads like the `.`-joined descriptor and application runs
/// right-to-left.
#[derive(Clone, Debug)]
pub struct Automorphism<M: SquareMatrix> {
    chain: Vec<Primitive<M>>,
}

impl<M: SquareMatrix> Automorphism<M> {
    pub fn identity() -> Self {
        Self { chain: Vec::new() }
    }

    /// Conjugation by `mat`, which must be invertible in its ring.
    pub fn inner(mat: M) -> Result<Self> {
        let inv = mat.inverse()?;
        Ok(Self { chain: vec![Primitive::Inner { mat, inv }] })
    }

    pub fn transpose_inverse() -> Self {
        Self { chain: vec![Primitive::TransposeInverse] }
    }

    pub fn conj_by_sign() -> Self {
        Self { chain: vec![Primitive::ConjBySign] }
    }

    pub fn conj_by_swap() -> Self {
        Self { chain: vec![Primitive::ConjBySwap] }
    }

    pub fn character_twist(chi: Character<M>) -> Self {
        Self { chain: vec![Primitive::CharacterTwist(chi)] }
    }

    /// self after other: (self.compose(other))(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        let mut chain = self.chain.clone();
        chain.extend(other.chain.iter().cloned());
        Self { chain }
    }

    pub fn apply(&self, x: &M) -> Result<M> {
        let mut y = x.clone();
        for p in self.chain.iter().rev() {
            y = p.apply(&y)?;
        }
        Ok(y)
    }

    pub fn chain_len(&self) -> usize {
        self.chain.len()
    }
}

impl<M: SquareMatrix> fmt::Display for Automorphism<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_empty() {
            return f.write_str("id");
        }
        let tokens: Vec<&str> = self.chain.iter().map(|p| p.token()).collect();
        f.write_str(&tokens.join("."))
    }
}

impl Automorphism<IntMatrix> {
    /// The same chain over Z/m: inner matrices reduced entrywise, character
    /// tables pushed through reduction. Fails with `NonDescending` when two
    /// table entries become equal mod m but carry different signs.
    pub fn induced_mod(&self, m: u64) -> Result<Automorphism<ModMatrix>> {
        let mut chain = Vec::with_capacity(self.chain.len());
        for p in &self.chain {
            chain.push(match p {
                Primitive::Inner { mat, inv } => Primitive::Inner {
                    mat: mat.reduce_mod(m)?,
                    inv: inv.reduce_mod(m)?,
                },
                Primitive::TransposeInverse => Primitive::TransposeInverse,
                Primitive::ConjBySign => Primitive::ConjBySign,
                Primitive::ConjBySwap => Primitive::ConjBySwap,
                Primitive::CharacterTwist(Character::DetSign) => {
                    Primitive::CharacterTwist(Character::DetSign)
                }
                Primitive::CharacterTwist(Character::Table(t)) => {
                    let mut reduced: Vec<(ModMatrix, i8)> = Vec::with_capacity(t.entries.len());
                    let mut seen: HashMap<Vec<u64>, i8> = HashMap::new();
                    for (mat, sign) in &t.entries {
                        let r = mat.reduce_mod(m)?;
                        if let Some(prev) = seen.insert(r.canonical_key(), *sign) {
                            if prev != *sign {
                                return Err(Error::NonDescending(format!(
                                    "two table entries collide mod {m} with opposite signs"
                                )));
                            }
                        }
                        reduced.push((r, *sign));
                    }
                    Primitive::CharacterTwist(Character::Table(CharacterTable::new(reduced)?))
                }
            });
        }
        Ok(Automorphism { chain })
    }
}

// ---------------------------------------------------------------------------
// Outer representatives
// ---------------------------------------------------------------------------

/// Chains representing the outer automorphism classes of the integral group:
/// SL(n) odd n gives transpose-inverse; even n adds the sign conjugation and
/// the composite; Sp(2n) with 2n > 4 gives the swap conjugation; Sp(4) also
/// needs a caller-supplied character for the scalar twist.
pub fn out_representatives<M: SquareMatrix>(
    family: &crate::groups::GroupFamily,
    sp4_character: Option<Character<M>>,
) -> Result<Vec<Automorphism<M>>> {
    use crate::groups::GroupKind;
    let tau = Automorphism::transpose_inverse;
    match family.kind() {
        GroupKind::SpecialLinear => {
            if family.dim() % 2 == 1 {
                Ok(vec![tau()])
            } else {
                let sigma = Automorphism::conj_by_sign();
                Ok(vec![tau(), sigma.clone(), tau().compose(&sigma)])
            }
        }
        GroupKind::Symplectic => {
            let theta = Automorphism::conj_by_swap();
            if family.dim() > 4 {
                Ok(vec![theta])
            } else if family.dim() == 4 {
                let chi = sp4_character.ok_or_else(|| {
                    Error::InvalidInput(
                        "outer representatives for dimension 4 need a character".into(),
                    )
                })?;
                let twist = Automorphism::character_twist(chi);
                Ok(vec![theta.clone(), twist.clone(), theta.compose(&twist)])
            } else {
                Err(Error::InvalidInput(
                    "no outer representatives below dimension 4 for the symplectic family".into(),
                ))
            }
        }
        GroupKind::GeneralLinear => Err(Error::InvalidInput(
            "outer representatives are provided for sl and sp families only".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Validation on a finite group
// ---------------------------------------------------------------------------

/// Result of checking a chain against a concrete finite group. Failures are
/// data, not errors: callers decide whether an unusable automorphism aborts
/// the run or just disqualifies one modulus.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub group: String,
    pub automorphism: String,
    pub group_order: usize,
    pub closure_ok: bool,
    pub homomorphism_ok: bool,
    pub bijective_ok: bool,
    pub pairs_checked: usize,
    pub exhaustive_pairs: bool,
    pub seed: u64,
    pub failure: Option<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.closure_ok && self.homomorphism_ok && self.bijective_ok
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!(
                "{} on {}: closure, homomorphism ({} pairs{}), bijectivity all hold",
                self.automorphism,
                self.group,
                self.pairs_checked,
                if self.exhaustive_pairs { ", exhaustive" } else { ", sampled" }
            )
        } else {
            format!(
                "{} on {}: {}",
                self.automorphism,
                self.group,
                self.failure.as_deref().unwrap_or("failed")
            )
        }
    }
}

pub fn validate_automorphism(
    phi: &Automorphism<ModMatrix>,
    group: &FiniteMatrixGroup,
    seed: u64,
) -> ValidationReport {
    validate_with_images(phi, group, seed).0
}

/// Validation plus, on success, the index-level image table for reuse by the
/// orbit engine (index i maps to images[i]).
pub(crate) fn validate_with_images(
    phi: &Automorphism<ModMatrix>,
    group: &FiniteMatrixGroup,
    seed: u64,
) -> (ValidationReport, Option<Vec<u32>>) {
    let n = group.order();
    let mut report = ValidationReport {
        group: group.descriptor().to_string(),
        automorphism: phi.to_string(),
        group_order: n,
        closure_ok: true,
        homomorphism_ok: false,
        bijective_ok: false,
        pairs_checked: 0,
        exhaustive_pairs: false,
        seed,
        failure: None,
    };

    let mut images: Vec<u32> = Vec::with_capacity(n);
    for idx in 0..n {
        let x = group.element(idx);
        match phi.apply(&x) {
            Ok(y) => match group.index_of(&y) {
                Some(j) => images.push(j),
                None => {
                    report.closure_ok = false;
                    report.failure =
                        Some(format!("image of element {idx} lies outside the group"));
                    return (report, None);
                }
            },
            Err(e) => {
                report.closure_ok = false;
                report.failure = Some(format!("map undefined on element {idx}: {e}"));
                return (report, None);
            }
        }
    }

    let mut seen = vec![false; n];
    let mut distinct = 0usize;
    for &j in &images {
        if !seen[j as usize] {
            seen[j as usize] = true;
            distinct += 1;
        }
    }
    report.bijective_ok = distinct == n;
    if !report.bijective_ok {
        report.failure = Some(format!("image has {distinct} distinct elements out of {n}"));
    }

    let check_pair = |i: u32, j: u32| -> bool {
        images[group.product_index(i, j) as usize]
            == group.product_index(images[i as usize], images[j as usize])
    };
    let mut hom_ok = true;
    let mut pairs = 0usize;
    if n <= FULL_PAIR_LIMIT {
        report.exhaustive_pairs = true;
        'outer: for i in 0..n as u32 {
            for j in 0..n as u32 {
                pairs += 1;
                if !check_pair(i, j) {
                    hom_ok = false;
                    report.failure =
                        Some(format!("phi(xy) != phi(x)phi(y) for indices ({i}, {j})"));
                    break 'outer;
                }
            }
        }
    } else {
        let mut rng = rng_from_seed(seed);
        for _ in 0..SAMPLED_PAIRS {
            let i = rng.gen_range(0..n as u32);
            let j = rng.gen_range(0..n as u32);
            pairs += 1;
            if !check_pair(i, j) {
                hom_ok = false;
                report.failure = Some(format!("phi(xy) != phi(x)phi(y) for indices ({i}, {j})"));
                break;
            }
        }
    }
    report.homomorphism_ok = hom_ok;
    report.pairs_checked = pairs;

    if report.passed() {
        (report, Some(images))
    } else {
        (report, None)
    }
}

// ---------------------------------------------------------------------------
// Descriptors and table files
// ---------------------------------------------------------------------------

/// Parse a `.`-joined composition descriptor, outermost first. Recognized
/// segments: `id`, `tau` (transpose-inverse), `sigma` (conjugation by
/// diag(1,...,1,-1)), `theta` (conjugation by the leading 2x2 swap),
/// `inner:<matrix-file>`, `chartwist:detsign`, `chartwist:<table-file>`.
/// Dots inside file names are kept with the preceding `inner:`/`chartwist:`
/// segment, so `tau.inner:M.json` parses as two primitives.
pub fn parse_automorphism_descriptor(s: &str) -> Result<Automorphism<IntMatrix>> {
    let mut segments: Vec<String> = Vec::new();
    for tok in s.split('.') {
        let starts_new = matches!(tok, "id" | "tau" | "sigma" | "theta") || tok.contains(':');
        if starts_new {
            segments.push(tok.to_string());
        } else if let Some(last) = segments.last_mut() {
            if last.starts_with("inner:") || last.starts_with("chartwist:") {
                last.push('.');
                last.push_str(tok);
            } else {
                return Err(Error::InvalidInput(format!(
                    "automorphism descriptor has stray segment {tok:?} in {s:?}"
                )));
            }
        } else {
            return Err(Error::InvalidInput(format!(
                "unknown automorphism descriptor {s:?}"
            )));
        }
    }
    if segments.is_empty() {
        return Err(Error::InvalidInput("empty automorphism descriptor".into()));
    }

    let mut result = Automorphism::identity();
    for seg in &segments {
        let prim = match seg.as_str() {
            "id" => Automorphism::identity(),
            "tau" => Automorphism::transpose_inverse(),
            "sigma" => Automorphism::conj_by_sign(),
            "theta" => Automorphism::conj_by_swap(),
            other => {
                if let Some(path) = other.strip_prefix("inner:") {
                    let mat = crate::matrix::read_matrix_file(Path::new(path))?;
                    Automorphism::inner(mat)?
                } else if let Some(rest) = other.strip_prefix("chartwist:") {
                    if rest == "detsign" {
                        Automorphism::character_twist(Character::DetSign)
                    } else {
                        let pairs = read_character_table(Path::new(rest))?;
                        Automorphism::character_twist(Character::Table(CharacterTable::new(
                            pairs,
                        )?))
                    }
                } else {
                    return Err(Error::InvalidInput(format!(
                        "unknown automorphism segment {other:?}"
                    )));
                }
            }
        };
        result = result.compose(&prim);
    }
    Ok(result)
}

#[derive(serde::Deserialize)]
struct TableFile {
    n: usize,
    entries: Vec<TableFileEntry>,
}

#[derive(serde::Deserialize)]
struct TableFileEntry {
    rows: Vec<Vec<serde_json::Number>>,
    sign: i8,
}

/// Character table file: JSON `{"n": 2, "entries": [{"rows": [[...], ...],
/// "sign": 1}, ...]}` with exact integer entries of any size.
pub fn read_character_table(path: &Path) -> Result<Vec<(IntMatrix, i8)>> {
    let text = std::fs::read_to_string(path)?;
    let file: TableFile = serde_json::from_str(&text)?;
    let mut pairs = Vec::with_capacity(file.entries.len());
    for entry in &file.entries {
        if entry.rows.len() != file.n || entry.rows.iter().any(|r| r.len() != file.n) {
            return Err(Error::InvalidInput(format!(
                "character table entry is not {0}x{0}",
                file.n
            )));
        }
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(file.n);
        for r in &entry.rows {
            rows.push(r.iter().map(number_to_bigint).collect::<Result<_>>()?);
        }
        pairs.push((IntMatrix::from_rows(rows)?, entry.sign));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{parse_group_descriptor, FiniteMatrixGroup, GroupFamily, DEFAULT_ELEMENT_CAP};
    use crate::sampling::{random_special_linear, transvection};
    use num_traits::One;

    fn quotient(desc: &str) -> FiniteMatrixGroup {
        let (family, m) = parse_group_descriptor(desc).unwrap();
        FiniteMatrixGroup::build_quotient(&family, m, DEFAULT_ELEMENT_CAP).unwrap()
    }

    fn lower_uni(k: i64) -> IntMatrix {
        transvection(2, 1, 0, &BigInt::from(k))
    }

    #[test]
    fn transpose_inverse_on_lower_unitriangular() {
        let tau = Automorphism::transpose_inverse();
        let got = tau.apply(&lower_uni(3)).unwrap();
        let want = IntMatrix::from_i64_rows(&[&[1, -3], &[0, 1]]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn sign_conjugation_fixes_leading_block() {
        let sigma = Automorphism::conj_by_sign();
        let x = IntMatrix::from_i64_rows(&[&[2, 3, 0], &[1, 2, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(sigma.apply(&x).unwrap(), x);
        let y = IntMatrix::from_i64_rows(&[&[1, 0, 2], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let y_img = IntMatrix::from_i64_rows(&[&[1, 0, -2], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(sigma.apply(&y).unwrap(), y_img);
    }

    #[test]
    fn swap_conjugation_transposes_symmetric_witness_block() {
        // diag(C(2), I) with C(2) = [[5,2],[2,1]] maps to diag([[1,2],[2,5]], I).
        let theta = Automorphism::conj_by_swap();
        let x = IntMatrix::from_i64_rows(&[
            &[5, 2, 0, 0],
            &[2, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ])
        .unwrap();
        let want = IntMatrix::from_i64_rows(&[
            &[1, 2, 0, 0],
            &[2, 5, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(theta.apply(&x).unwrap(), want);
    }

    #[test]
    fn basic_chains_are_involutions_on_random_elements() {
        let mut rng = rng_from_seed(11);
        let tau = Automorphism::transpose_inverse();
        let sigma = Automorphism::conj_by_sign();
        for _ in 0..25 {
            let x = random_special_linear(3, &mut rng, 8, 3);
            assert_eq!(tau.apply(&tau.apply(&x).unwrap()).unwrap(), x);
            assert_eq!(sigma.apply(&sigma.apply(&x).unwrap()).unwrap(), x);
        }
        let theta = Automorphism::conj_by_swap();
        for k in [-3i64, 1, 7] {
            let t = crate::groups::symplectic_transvection_int(4, &[1, 0, 1, 0], k);
            assert_eq!(theta.apply(&theta.apply(&t).unwrap()).unwrap(), t);
        }
    }

    #[test]
    fn composition_applies_right_to_left() {
        let tau = Automorphism::transpose_inverse();
        let g = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let inner = Automorphism::inner(g.clone()).unwrap();
        let chain = tau.compose(&inner);
        let x = lower_uni(2);
        let want = tau.apply(&inner.apply(&x).unwrap()).unwrap();
        assert_eq!(chain.apply(&x).unwrap(), want);
        assert_eq!(chain.to_string(), "tau.inner");
    }

    #[test]
    fn induced_map_commutes_with_reduction() {
        let tau = Automorphism::<IntMatrix>::transpose_inverse();
        let reduced = tau.induced_mod(5).unwrap();
        let b3 = lower_uni(3);
        let lhs = reduced.apply(&b3.reduce_mod(5).unwrap()).unwrap();
        let rhs = tau.apply(&b3).unwrap().reduce_mod(5).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, ModMatrix::from_i64_rows(5, &[&[1, 2], &[0, 1]]).unwrap());
    }

    #[test]
    fn equivariance_of_induced_chains() {
        let mut rng = rng_from_seed(7);
        let tau = Automorphism::<IntMatrix>::transpose_inverse();
        let sigma = Automorphism::<IntMatrix>::conj_by_sign();
        let both = tau.compose(&sigma);
        for phi in [&tau, &sigma, &both] {
            for m in [2u64, 3, 5] {
                let induced = phi.induced_mod(m).unwrap();
                for _ in 0..100 {
                    let x = random_special_linear(3, &mut rng, 6, 2);
                    let lhs = induced.apply(&x.reduce_mod(m).unwrap()).unwrap();
                    let rhs = phi.apply(&x).unwrap().reduce_mod(m).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sign_conjugation_reduces_to_identity_mod_two() {
        let sigma = Automorphism::<IntMatrix>::conj_by_sign();
        let induced = sigma.induced_mod(2).unwrap();
        let g = quotient("sl:3:2");
        for idx in 0..g.order() {
            let x = g.element(idx);
            assert_eq!(induced.apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn validation_passes_for_transpose_inverse() {
        let g = quotient("sl:2:5");
        let tau = Automorphism::<ModMatrix>::transpose_inverse();
        let report = validate_automorphism(&tau, &g, 0);
        assert!(report.passed(), "{}", report.summary());
        assert!(report.exhaustive_pairs);
    }

    #[test]
    fn validation_passes_for_inner_maps() {
        let g = quotient("sl:2:3");
        for idx in [1usize, 5, 10] {
            let phi = Automorphism::inner(g.element(idx)).unwrap();
            let report = validate_automorphism(&phi, &g, 0);
            assert!(report.passed(), "{}", report.summary());
        }
    }

    #[test]
    fn validation_passes_for_detsign_twist_on_gl() {
        let g = quotient("gl:2:3");
        let phi = Automorphism::character_twist(Character::<ModMatrix>::DetSign);
        let report = validate_automorphism(&phi, &g, 0);
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn detsign_twist_on_odd_dimension_is_not_bijective() {
        // det(-I) = -1 in odd dimension, so x and -x share an image and the
        // twist is two-to-one. The validator must catch this.
        let g = quotient("gl:3:3");
        let phi = Automorphism::character_twist(Character::<ModMatrix>::DetSign);
        let report = validate_automorphism(&phi, &g, 0);
        assert!(report.closure_ok);
        assert!(report.homomorphism_ok);
        assert!(!report.bijective_ok);
        assert_eq!(
            report.failure.as_deref(),
            Some("image has 5616 distinct elements out of 11232")
        );
    }

    #[test]
    fn validation_rejects_a_non_multiplicative_table() {
        let g = quotient("sl:2:3");
        // Flip the sign of exactly one non-identity element: not a character.
        let mut pairs = Vec::new();
        for idx in 0..g.order() {
            pairs.push((g.element(idx), if idx == 3 { -1 } else { 1 }));
        }
        let phi = Automorphism::character_twist(Character::Table(
            CharacterTable::new(pairs).unwrap(),
        ));
        let report = validate_automorphism(&phi, &g, 0);
        assert!(!report.passed());
        assert!(!report.homomorphism_ok);
    }

    #[test]
    fn table_reduction_detects_sign_collisions() {
        let table = CharacterTable::new(vec![
            (IntMatrix::identity(2), 1),
            (lower_uni(3), -1),
        ])
        .unwrap();
        let phi = Automorphism::character_twist(Character::Table(table));
        match phi.induced_mod(3) {
            Err(Error::NonDescending(_)) => {}
            other => panic!("expected NonDescending, got {other:?}"),
        }
        assert!(phi.induced_mod(5).is_ok());
    }

    #[test]
    fn outer_representative_lists() {
        let sl3 = GroupFamily::special_linear(3).unwrap();
        let sl4 = GroupFamily::special_linear(4).unwrap();
        let sp4 = GroupFamily::symplectic(4).unwrap();
        let sp6 = GroupFamily::symplectic(6).unwrap();
        let gl2 = GroupFamily::general_linear(2).unwrap();

        let reps = out_representatives::<IntMatrix>(&sl3, None).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].to_string(), "tau");

        let reps = out_representatives::<IntMatrix>(&sl4, None).unwrap();
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[2].to_string(), "tau.sigma");

        let reps = out_representatives::<IntMatrix>(&sp6, None).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].to_string(), "theta");

        assert!(out_representatives::<IntMatrix>(&sp4, None).is_err());
        let reps = out_representatives(&sp4, Some(Character::<IntMatrix>::DetSign)).unwrap();
        assert_eq!(reps.len(), 3);

        assert!(out_representatives::<IntMatrix>(&gl2, None).is_err());
    }

    #[test]
    fn descriptor_parsing_groups_file_names() {
        let dir = std::env::temp_dir().join(format!("tconj-aut-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("M.json");
        std::fs::write(&path, r#"{"n": 2, "entries": [[2, 1], [1, 1]]}"#).unwrap();

        let desc = format!("tau.inner:{}", path.display());
        let phi = parse_automorphism_descriptor(&desc).unwrap();
        assert_eq!(phi.chain_len(), 2);
        let x = lower_uni(1);
        let g = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]]).unwrap();
        let want = Automorphism::transpose_inverse()
            .apply(&Automorphism::inner(g).unwrap().apply(&x).unwrap())
            .unwrap();
        assert_eq!(phi.apply(&x).unwrap(), want);

        assert!(parse_automorphism_descriptor("tau").is_ok());
        assert!(parse_automorphism_descriptor("id").is_ok());
        assert_eq!(
            parse_automorphism_descriptor("id").unwrap().chain_len(),
            0
        );
        assert!(parse_automorphism_descriptor("chartwist:detsign").is_ok());
        assert!(parse_automorphism_descriptor("").is_err());
        assert!(parse_automorphism_descriptor("rho").is_err());
        assert!(parse_automorphism_descriptor("tau.json").is_err());

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn character_table_files_round_trip() {
        let dir = std::env::temp_dir().join(format!("tconj-tbl-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("chi.json");
        std::fs::write(
            &path,
            r#"{"n": 2, "entries": [
                {"rows": [[1, 0], [0, 1]], "sign": 1},
                {"rows": [[-1, 0], [0, -1]], "sign": -1}
            ]}"#,
        )
        .unwrap();
        let pairs = read_character_table(&path).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[1].1, -1);
        assert!(pairs[0].0.det().is_one());

        let desc = format!("chartwist:{}", path.display());
        let phi = parse_automorphism_descriptor(&desc).unwrap();
        let x = IntMatrix::identity(2).negate();
        assert_eq!(phi.apply(&x).unwrap(), IntMatrix::identity(2));

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn validation_records_swap_conjugation_failures() {
        // The swap conjugator Y of the leading coordinate pair does not
        // normalize the symplectic group for the paired form: conjugating the
        // transvection for e1 + e3 breaks the form equation over Z, and the
        // defect survives mod 3. Validation must report this, not panic.
        let t = crate::groups::symplectic_transvection_int(4, &[1, 0, 1, 0], 1);
        let theta = Automorphism::conj_by_swap();
        let image = theta.apply(&t).unwrap();
        let sp4 = GroupFamily::symplectic(4).unwrap();
        assert!(crate::groups::is_member_integral(&sp4, &t).unwrap());
        assert!(!crate::groups::is_member_integral(&sp4, &image).unwrap());

        let g = quotient("sp:4:3");
        let report = validate_automorphism(&Automorphism::conj_by_swap(), &g, 0);
        assert!(!report.closure_ok, "{}", report.summary());
    }
}
