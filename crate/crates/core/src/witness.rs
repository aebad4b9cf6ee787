//! Explicit witness families and the machinery that certifies their
//! twisted-class distinctness: exact algebraic identities, bounded
//! brute-force search for twisted conjugators, finite-quotient
//! certificates, and separating families inside congruence subgroups.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::groups::{FiniteMatrixGroup, GroupFamily};
use crate::matrix::IntMatrix;
use crate::orbits::{twisted_partition, TwistedPartition};

/// The two witness shapes and their placed generalizations. `Elementary`
/// is the transvection I + k*E_21 (parameter in row 2, column 1);
/// `Symmetric` pads the determinant-1 symmetric block [[k^2+1, k], [k, 1]]
/// with the identity. The `At` variants move the same patterns to an
/// arbitrary index pair (1-indexed, i != j): I + k*E_ji, respectively
/// I + k^2*E_ii + k*E_ij + k*E_ji.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Elementary,
    Symmetric,
    ElementaryAt(usize, usize),
    SymmetricAt(usize, usize),
}

impl WitnessKind {
    pub fn token(&self) -> String {
        match self {
            WitnessKind::Elementary => "A".into(),
            WitnessKind::Symmetric => "X".into(),
            WitnessKind::ElementaryAt(i, j) => format!("A_at({i},{j})"),
            WitnessKind::SymmetricAt(i, j) => format!("X_at({i},{j})"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "A" => return Ok(WitnessKind::Elementary),
            "X" => return Ok(WitnessKind::Symmetric),
            _ => {}
        }
        let placed = s
            .strip_prefix("A_at(")
            .map(|rest| (false, rest))
            .or_else(|| s.strip_prefix("X_at(").map(|rest| (true, rest)));
        if let Some((symmetric, rest)) = placed {
            if let Some(body) = rest.strip_suffix(')') {
                if let Some((i, j)) = body.split_once(',') {
                    let i: usize = i.trim().parse().map_err(|_| bad_family(s))?;
                    let j: usize = j.trim().parse().map_err(|_| bad_family(s))?;
                    return Ok(if symmetric {
                        WitnessKind::SymmetricAt(i, j)
                    } else {
                        WitnessKind::ElementaryAt(i, j)
                    });
                }
            }
        }
        Err(bad_family(s))
    }
}

fn bad_family(s: &str) -> Error {
    Error::InvalidInput(format!(
        "unknown witness family {s:?} (expected A, X, A_at(i,j) or X_at(i,j))"
    ))
}

fn place_elementary(n: usize, i: usize, j: usize, a: &BigInt) -> IntMatrix {
    IntMatrix::from_fn(n, |r, s| {
        if r == s {
            BigInt::one()
        } else if (r, s) == (j, i) {
            a.clone()
        } else {
            BigInt::zero()
        }
    })
}

fn place_symmetric(n: usize, i: usize, j: usize, a: &BigInt) -> IntMatrix {
    IntMatrix::from_fn(n, |r, s| {
        if (r, s) == (i, i) {
            a * a + 1
        } else if r == s {
            BigInt::one()
        } else if (r, s) == (i, j) || (r, s) == (j, i) {
            a.clone()
        } else {
            BigInt::zero()
        }
    })
}

pub fn make_witness(kind: WitnessKind, n: usize, k: i64) -> Result<IntMatrix> {
    make_witness_big(kind, n, &BigInt::from(k))
}

fn make_witness_big(kind: WitnessKind, n: usize, k: &BigInt) -> Result<IntMatrix> {
    if n < 2 {
        return Err(Error::InvalidInput(
            "witnesses need dimension at least 2".into(),
        ));
    }
    let (i, j) = match kind {
        WitnessKind::Elementary | WitnessKind::Symmetric => (1, 2),
        WitnessKind::ElementaryAt(i, j) | WitnessKind::SymmetricAt(i, j) => (i, j),
    };
    if i < 1 || j < 1 || i > n || j > n || i == j {
        return Err(Error::InvalidInput(format!(
            "witness indices ({i},{j}) invalid for dimension {n}"
        )));
    }
    let (i, j) = (i - 1, j - 1);
    Ok(match kind {
        WitnessKind::Elementary | WitnessKind::ElementaryAt(..) => place_elementary(n, i, j, k),
        WitnessKind::Symmetric | WitnessKind::SymmetricAt(..) => place_symmetric(n, i, j, k),
    })
}

/// Exact check of the product identity that drives the divisibility
/// argument: X * W * tX = X * tX + k * c2 * t(c1), where W = I + k*E_21
/// and c1, c2 are the first two columns of X. The identity holds for every
/// square X; this function recomputes both sides independently.
pub fn tau_action_identity_check(x: &IntMatrix, k: i64) -> Result<bool> {
    let n = x.dim();
    let w = make_witness(WitnessKind::Elementary, n, k)?;
    let xt = x.transpose();
    let lhs = x.mat_mul(&w)?.mat_mul(&xt)?;
    let outer = IntMatrix::outer(&x.column(1), &x.column(0))?;
    let rhs = x.mat_mul(&xt)?.add(&outer.scalar_mul(&BigInt::from(k)))?;
    Ok(lhs == rhs)
}

/// Outcome of the bounded search for twisted conjugators.
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub enumerated: u64,
    pub unimodular: u64,
    pub solutions: Vec<IntMatrix>,
}

/// Exhaustively enumerates X with entries in [-bound, bound] and
/// det X = 1, collecting every solution of X * A(k) * tX = A(l). An empty
/// solution list is evidence (within the box) that the parameters lie in
/// distinct twisted classes; a nonempty one proves they coincide. The
/// search space (2*bound+1)^(n^2) must not exceed `cap`.
pub fn tau_no_solution_oracle(
    k: i64,
    l: i64,
    n: usize,
    bound: i64,
    cap: u64,
) -> Result<SearchReport> {
    if n < 2 || bound < 1 {
        return Err(Error::InvalidInput(
            "oracle needs dimension >= 2 and bound >= 1".into(),
        ));
    }
    let cells = n * n;
    let radix = (2 * bound + 1) as u128;
    let total = radix
        .checked_pow(cells as u32)
        .ok_or_else(|| Error::InvalidInput("search space size overflows".into()))?;
    if total > cap as u128 {
        return Err(Error::ResourceLimit {
            limit: cap as usize,
            reached: total.min(usize::MAX as u128) as usize,
        });
    }

    let mut entries = vec![-bound; cells];
    let mut report = SearchReport {
        enumerated: 0,
        unimodular: 0,
        solutions: Vec::new(),
    };
    loop {
        report.enumerated += 1;
        if det_i128(n, &entries) == 1 {
            report.unimodular += 1;
            if twisted_equation_holds(n, &entries, k as i128, l as i128) {
                report.solutions.push(IntMatrix::from_fn(n, |r, s| {
                    BigInt::from(entries[r * n + s])
                }));
            }
        }
        // Odometer step over the entry box.
        let mut pos = cells;
        loop {
            if pos == 0 {
                return Ok(report);
            }
            pos -= 1;
            if entries[pos] < bound {
                entries[pos] += 1;
                break;
            }
            entries[pos] = -bound;
        }
    }
}

fn det_i128(n: usize, entries: &[i64]) -> i128 {
    match n {
        2 => {
            entries[0] as i128 * entries[3] as i128 - entries[1] as i128 * entries[2] as i128
        }
        _ => {
            let a: Vec<i128> = entries.iter().map(|&e| e as i128).collect();
            det_rec(n, &a, &(0..n).collect::<Vec<_>>())
        }
    }
}

fn det_rec(n: usize, a: &[i128], cols: &[usize]) -> i128 {
    let row = n - cols.len();
    if cols.len() == 1 {
        return a[row * n + cols[0]];
    }
    let mut acc = 0i128;
    let mut rest = Vec::with_capacity(cols.len() - 1);
    for (pos, &c) in cols.iter().enumerate() {
        let coeff = a[row * n + c];
        if coeff == 0 {
            continue;
        }
        rest.clear();
        rest.extend(cols.iter().filter(|&&x| x != c));
        let minor = det_rec(n, a, &rest);
        if pos % 2 == 0 {
            acc += coeff * minor;
        } else {
            acc -= coeff * minor;
        }
    }
    acc
}

fn twisted_equation_holds(n: usize, x: &[i64], k: i128, l: i128) -> bool {
    // P = X * (I + k*E_21): adds k times column 1 to column 0.
    let mut p = vec![0i128; n * n];
    for r in 0..n {
        for s in 0..n {
            p[r * n + s] = x[r * n + s] as i128;
        }
        p[r * n] += k * x[r * n + 1] as i128;
    }
    // Q = P * tX, compared entrywise against I + l*E_21.
    for r in 0..n {
        for s in 0..n {
            let mut q = 0i128;
            for t in 0..n {
                q += p[r * n + t] * x[s * n + t] as i128;
            }
            let want = match (r, s) {
                (a, b) if a == b => 1,
                (1, 0) => l,
                _ => 0,
            };
            if q != want {
                return false;
            }
        }
    }
    true
}

/// A positive distinctness result: the two reduced witnesses landed in
/// different twisted classes of the stated quotient, which separates them
/// over the integers as well. Field order is the output contract.
#[derive(Clone, Debug, Serialize)]
pub struct DistinctnessCertificate {
    pub family: String,
    pub automorphism: String,
    pub n: usize,
    pub k: i64,
    pub l: i64,
    pub modulus: u64,
    pub class_ids: [u32; 2],
    pub verdict: String,
}

/// One failed attempt in a certificate search; the note says why the
/// modulus did not separate the pair.
#[derive(Clone, Debug, Serialize)]
pub struct ModulusTrial {
    pub modulus: u64,
    pub note: String,
}

#[derive(Debug)]
pub enum CertifyOutcome {
    Distinct(DistinctnessCertificate),
    /// No listed modulus separated the pair. This is not a proof of
    /// equality: classes distinct over the integers can fuse in every
    /// small quotient.
    Inconclusive(Vec<ModulusTrial>),
}

enum ModulusState {
    Ready(TwistedPartition),
    Unusable(String),
}

/// Caches one quotient partition per modulus so a batch of certificate
/// queries (many parameter pairs over the same moduli) pays each orbit
/// computation once.
pub struct CertifySession {
    family: GroupFamily,
    phi: Automorphism<IntMatrix>,
    label: String,
    element_cap: usize,
    seed: u64,
    states: HashMap<u64, ModulusState>,
}

impl CertifySession {
    pub fn new(
        family: GroupFamily,
        phi: Automorphism<IntMatrix>,
        label: impl Into<String>,
        element_cap: usize,
        seed: u64,
    ) -> Self {
        CertifySession {
            family,
            phi,
            label: label.into(),
            element_cap,
            seed,
            states: HashMap::new(),
        }
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The cached partition for a modulus, or None if the automorphism is
    /// unusable there. Resource exhaustion while building the quotient is
    /// a hard error, not an unusable modulus.
    pub fn partition(&mut self, modulus: u64) -> Result<Option<&TwistedPartition>> {
        self.ensure_state(modulus)?;
        match &self.states[&modulus] {
            ModulusState::Ready(p) => Ok(Some(p)),
            ModulusState::Unusable(_) => Ok(None),
        }
    }

    fn ensure_state(&mut self, modulus: u64) -> Result<()> {
        if self.states.contains_key(&modulus) {
            return Ok(());
        }
        let state = match self.phi.induced_mod(modulus) {
            Err(Error::NonDescending(msg)) => {
                ModulusState::Unusable(format!("automorphism does not descend: {msg}"))
            }
            Err(e) => return Err(e),
            Ok(induced) => {
                let group =
                    FiniteMatrixGroup::build_quotient(&self.family, modulus, self.element_cap)?;
                match twisted_partition(Arc::new(group), &induced, self.seed) {
                    Ok(p) => ModulusState::Ready(p),
                    Err(Error::InvalidAutomorphism(report)) => ModulusState::Unusable(
                        report
                            .failure
                            .clone()
                            .unwrap_or_else(|| "validation failed".into()),
                    ),
                    Err(e) => return Err(e),
                }
            }
        };
        self.states.insert(modulus, state);
        Ok(())
    }

    /// Tries the moduli in the given order and returns a certificate for
    /// the first one whose partition separates the two witnesses.
    pub fn certify_pair(
        &mut self,
        kind: WitnessKind,
        k: i64,
        l: i64,
        moduli: &[u64],
    ) -> Result<CertifyOutcome> {
        let n = self.family.dim();
        let wk = make_witness(kind, n, k)?;
        let wl = make_witness(kind, n, l)?;
        let mut trials = Vec::with_capacity(moduli.len());
        for &m in moduli {
            self.ensure_state(m)?;
            match &self.states[&m] {
                ModulusState::Unusable(note) => trials.push(ModulusTrial {
                    modulus: m,
                    note: format!("modulus unusable: {note}"),
                }),
                ModulusState::Ready(partition) => {
                    let a = partition.class_of(&wk.reduce_mod(m)?)?;
                    let b = partition.class_of(&wl.reduce_mod(m)?)?;
                    if a != b {
                        return Ok(CertifyOutcome::Distinct(DistinctnessCertificate {
                            family: kind.token(),
                            automorphism: self.label.clone(),
                            n,
                            k,
                            l,
                            modulus: m,
                            class_ids: [a, b],
                            verdict: "distinct".into(),
                        }));
                    }
                    trials.push(ModulusTrial {
                        modulus: m,
                        note: format!("classes coincide (class {a})"),
                    });
                }
            }
        }
        Ok(CertifyOutcome::Inconclusive(trials))
    }
}

/// One-shot certificate search; see [`CertifySession`] for batches.
pub fn certify_distinct(
    family: &GroupFamily,
    phi: &Automorphism<IntMatrix>,
    label: &str,
    kind: WitnessKind,
    k: i64,
    l: i64,
    moduli: &[u64],
    element_cap: usize,
    seed: u64,
) -> Result<CertifyOutcome> {
    CertifySession::new(*family, phi.clone(), label, element_cap, seed)
        .certify_pair(kind, k, l, moduli)
}

/// Produces `count` matrices, each congruent to the identity mod `level`
/// and of determinant 1, whose products against `m` have pairwise distinct
/// traces. If `m` has a nonzero diagonal entry m_ii the symmetric pattern
/// at (i, j) gives traces growing quadratically in the parameter; the
/// starting parameter is chosen large enough that the linear cross term
/// m_ij + m_ji can never cancel a difference, and each candidate is
/// re-checked against the emitted list anyway. With a zero diagonal the
/// first nonzero entry m_ij drives linearly growing traces instead.
pub fn separating_family(m: &IntMatrix, level: u64, count: usize) -> Result<Vec<IntMatrix>> {
    let n = m.dim();
    if n < 3 {
        return Err(Error::InvalidInput(
            "separating families need dimension at least 3".into(),
        ));
    }
    if level == 0 || count == 0 {
        return Err(Error::InvalidInput(
            "separating families need level >= 1 and count >= 1".into(),
        ));
    }
    if m.det() != BigInt::one() {
        return Err(Error::InvalidInput(
            "separating families need determinant 1".into(),
        ));
    }
    let lvl = BigInt::from(level);

    let out = if let Some(i) = (0..n).find(|&i| !m.get(i, i).is_zero()) {
        let j = usize::from(i == 0);
        let mii = m.get(i, i).clone();
        let cross = m.get(i, j) + m.get(j, i);
        let mut k: BigInt = cross.abs() / (&lvl * mii.abs()) + 1;
        let mut out = Vec::with_capacity(count);
        let mut params: Vec<BigInt> = Vec::with_capacity(count);
        while out.len() < count {
            let a = &lvl * &k;
            let collides = params.iter().any(|b: &BigInt| {
                let lin: BigInt = (&a + b) * &mii + &cross;
                lin.is_zero()
            });
            if !collides {
                out.push(place_symmetric(n, i, j, &a));
                params.push(a);
            }
            k += 1;
        }
        out
    } else {
        let (i, j) = (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .find(|&(r, c)| !m.get(r, c).is_zero())
            .expect("a determinant-1 matrix is nonzero");
        (1..=count)
            .map(|k| place_elementary(n, i, j, &(&lvl * BigInt::from(k))))
            .collect()
    };

    let mut traces: Vec<BigInt> = out
        .iter()
        .map(|w| Ok(w.mat_mul(m)?.trace()))
        .collect::<Result<_>>()?;
    traces.sort();
    traces.dedup();
    assert_eq!(traces.len(), out.len(), "trace collision in separating family");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::Character;
    use crate::groups::{in_congruence_subgroup, is_member_integral};
    use crate::matrix::ModMatrix;
    use crate::orbits::inner_trace_invariant;
    use crate::sampling::{random_special_linear, rng_from_seed};

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn witness_shapes() {
        assert_eq!(
            make_witness(WitnessKind::Elementary, 3, 2).unwrap(),
            m(&[&[1, 0, 0], &[2, 1, 0], &[0, 0, 1]])
        );
        assert_eq!(
            make_witness(WitnessKind::Symmetric, 2, 1).unwrap(),
            m(&[&[2, 1], &[1, 1]])
        );
        assert_eq!(
            make_witness(WitnessKind::Elementary, 4, 0).unwrap(),
            IntMatrix::identity(4)
        );
        // Standard kinds sit at the (1,2) placement.
        for k in [1, 3, 7] {
            assert_eq!(
                make_witness(WitnessKind::Elementary, 3, k).unwrap(),
                make_witness(WitnessKind::ElementaryAt(1, 2), 3, k).unwrap()
            );
            assert_eq!(
                make_witness(WitnessKind::Symmetric, 4, k).unwrap(),
                make_witness(WitnessKind::SymmetricAt(1, 2), 4, k).unwrap()
            );
        }
        let placed = make_witness(WitnessKind::ElementaryAt(2, 3), 3, 5).unwrap();
        assert_eq!(placed, m(&[&[1, 0, 0], &[0, 1, 0], &[0, 5, 1]]));
        let placed = make_witness(WitnessKind::SymmetricAt(3, 1), 3, 2).unwrap();
        assert_eq!(placed, m(&[&[1, 0, 2], &[0, 1, 0], &[2, 0, 5]]));
    }

    #[test]
    fn witness_determinants_are_one() {
        for kind in [
            WitnessKind::Elementary,
            WitnessKind::Symmetric,
            WitnessKind::ElementaryAt(3, 1),
            WitnessKind::SymmetricAt(2, 4),
        ] {
            for k in [-3, 0, 1, 9] {
                let w = make_witness(kind, 4, k).unwrap();
                assert_eq!(w.det(), BigInt::one(), "{kind:?} k={k}");
            }
        }
    }

    #[test]
    fn witness_rejects_bad_indices() {
        assert!(make_witness(WitnessKind::Elementary, 1, 1).is_err());
        assert!(make_witness(WitnessKind::ElementaryAt(1, 1), 3, 1).is_err());
        assert!(make_witness(WitnessKind::ElementaryAt(0, 2), 3, 1).is_err());
        assert!(make_witness(WitnessKind::SymmetricAt(2, 4), 3, 1).is_err());
    }

    #[test]
    fn family_tokens_round_trip() {
        for kind in [
            WitnessKind::Elementary,
            WitnessKind::Symmetric,
            WitnessKind::ElementaryAt(2, 3),
            WitnessKind::SymmetricAt(3, 1),
        ] {
            assert_eq!(WitnessKind::parse(&kind.token()).unwrap(), kind);
        }
        assert!(WitnessKind::parse("B").is_err());
        assert!(WitnessKind::parse("A_at(1)").is_err());
        assert!(WitnessKind::parse("A_at(1,x)").is_err());
    }

    #[test]
    fn congruence_membership_tracks_parameter_divisibility() {
        for kind in [WitnessKind::Elementary, WitnessKind::Symmetric] {
            for modulus in [2u64, 3, 5] {
                for k in 0..12i64 {
                    let w = make_witness(kind, 3, k).unwrap();
                    let inside = in_congruence_subgroup(&w, modulus).unwrap();
                    assert_eq!(inside, k % modulus as i64 == 0, "{kind:?} k={k} m={modulus}");
                }
            }
        }
    }

    #[test]
    fn action_identity_holds_on_random_samples() {
        for n in [2usize, 3, 4] {
            let mut rng = rng_from_seed(n as u64);
            for _ in 0..20 {
                let x = random_special_linear(n, &mut rng, 12, 3);
                for k in [0i64, 1, 4, 10] {
                    assert!(tau_action_identity_check(&x, k).unwrap());
                }
            }
        }
        // The identity is purely algebraic: determinants never enter.
        let skew = m(&[&[2, 5, 1], &[0, 3, 0], &[7, 1, 1]]);
        assert!(tau_action_identity_check(&skew, 6).unwrap());
    }

    #[test]
    fn oracle_finds_no_conjugator_for_distinct_parameters() {
        let report = tau_no_solution_oracle(1, 2, 2, 6, 1 << 20).unwrap();
        assert_eq!(report.enumerated, 28_561);
        assert_eq!(report.unimodular, 372);
        assert!(report.solutions.is_empty());
        // Divisibility of the parameters alone does not produce a solution.
        let report = tau_no_solution_oracle(2, 4, 2, 6, 1 << 20).unwrap();
        assert!(report.solutions.is_empty());
    }

    #[test]
    fn oracle_finds_identity_for_equal_parameters() {
        let report = tau_no_solution_oracle(3, 3, 2, 1, 1 << 20).unwrap();
        assert_eq!(report.enumerated, 81);
        assert_eq!(report.unimodular, 20);
        // Exactly the central elements solve the equation in this box.
        assert_eq!(report.solutions.len(), 2);
        assert!(report.solutions.contains(&IntMatrix::identity(2)));
        assert!(report.solutions.contains(&m(&[&[-1, 0], &[0, -1]])));
    }

    #[test]
    fn oracle_enforces_its_cap() {
        match tau_no_solution_oracle(1, 2, 3, 6, 1000) {
            Err(Error::ResourceLimit { limit, .. }) => assert_eq!(limit, 1000),
            other => panic!("expected ResourceLimit, got {other:?}"),
        }
    }

    fn tau_session(n: usize) -> CertifySession {
        let family = GroupFamily::special_linear(n).unwrap();
        CertifySession::new(
            family,
            Automorphism::<IntMatrix>::transpose_inverse(),
            "tau",
            200_000,
            0,
        )
    }

    #[test]
    fn certificates_separate_transvection_parameters() {
        let mut session = tau_session(2);
        match session
            .certify_pair(WitnessKind::Elementary, 1, 2, &[3, 5, 7])
            .unwrap()
        {
            CertifyOutcome::Distinct(cert) => {
                assert_eq!(cert.modulus, 3);
                assert_ne!(cert.class_ids[0], cert.class_ids[1]);
                assert_eq!(cert.verdict, "distinct");
                let json = serde_json::to_string(&cert).unwrap();
                let body: String = json
                    .split('"')
                    .enumerate()
                    .filter_map(|(i, s)| (i % 2 == 1).then_some(s))
                    .collect::<Vec<_>>()
                    .join(",");
                assert_eq!(
                    body,
                    "family,A,automorphism,tau,n,k,l,modulus,class_ids,verdict,distinct"
                );
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
        // The pair (1, 4) fuses at 3 and 5 but separates at 7 in dim 2.
        match session
            .certify_pair(WitnessKind::Elementary, 1, 4, &[3])
            .unwrap()
        {
            CertifyOutcome::Inconclusive(trials) => {
                assert_eq!(trials.len(), 1);
                assert!(trials[0].note.contains("classes coincide"));
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
        match session
            .certify_pair(WitnessKind::Elementary, 1, 4, &[3, 5, 7])
            .unwrap()
        {
            CertifyOutcome::Distinct(cert) => assert_eq!(cert.modulus, 5),
            other => panic!("expected a certificate, got {other:?}"),
        }
    }

    #[test]
    fn equal_parameters_never_certify() {
        let mut session = tau_session(2);
        match session
            .certify_pair(WitnessKind::Elementary, 2, 2, &[3, 5, 7])
            .unwrap()
        {
            CertifyOutcome::Inconclusive(trials) => {
                assert_eq!(trials.len(), 3);
                for trial in &trials {
                    assert!(trial.note.contains("classes coincide"));
                }
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn swap_conjugation_moduli_are_reported_unusable_or_unseparating() {
        // Conjugation by the basis swap fails closure on the mod-3
        // symplectic group, and at 2 (where it is valid) the symmetric
        // witnesses all share the identity's class.
        let family = GroupFamily::symplectic(4).unwrap();
        let mut session = CertifySession::new(
            family,
            Automorphism::<IntMatrix>::conj_by_swap(),
            "theta",
            200_000,
            0,
        );
        match session
            .certify_pair(WitnessKind::Symmetric, 1, 2, &[2, 3])
            .unwrap()
        {
            CertifyOutcome::Inconclusive(trials) => {
                assert_eq!(trials.len(), 2);
                assert!(trials[0].note.contains("classes coincide"));
                assert!(trials[1].note.contains("modulus unusable"));
            }
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn certify_propagates_resource_limits() {
        let family = GroupFamily::special_linear(2).unwrap();
        let phi = Automorphism::<IntMatrix>::transpose_inverse();
        match certify_distinct(&family, &phi, "tau", WitnessKind::Elementary, 1, 2, &[5], 100, 0)
        {
            Err(Error::ResourceLimit { limit, .. }) => assert_eq!(limit, 100),
            other => panic!("expected ResourceLimit, got {other:?}"),
        }
    }

    #[test]
    fn inner_certificates_agree_with_trace_invariant() {
        let family = GroupFamily::special_linear(2).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..4 {
            let g = random_special_linear(2, &mut rng, 8, 2);
            let phi = Automorphism::inner(g.clone()).unwrap();
            let mut session = CertifySession::new(family, phi, "inner", 200_000, 0);
            for (k, l) in [(1i64, 2i64), (1, 3), (2, 4)] {
                let outcome = session.certify_pair(WitnessKind::Elementary, k, l, &[3, 5]).unwrap();
                for modulus in [3u64, 5] {
                    let Some(partition) = session.partition(modulus).unwrap() else {
                        continue;
                    };
                    let gm = g.reduce_mod(modulus).unwrap();
                    let wk = make_witness(WitnessKind::Elementary, 2, k)
                        .unwrap()
                        .reduce_mod(modulus)
                        .unwrap();
                    let wl = make_witness(WitnessKind::Elementary, 2, l)
                        .unwrap()
                        .reduce_mod(modulus)
                        .unwrap();
                    let same = partition.class_of(&wk).unwrap() == partition.class_of(&wl).unwrap();
                    let tk = inner_trace_invariant(&wk, &gm).unwrap();
                    let tl = inner_trace_invariant(&wl, &gm).unwrap();
                    // The trace against the twisting element is a class
                    // invariant: distinct values force distinct classes.
                    if tk != tl {
                        assert!(!same);
                    }
                }
                // The partition is authoritative either way.
                if let CertifyOutcome::Distinct(cert) = outcome {
                    assert_ne!(cert.class_ids[0], cert.class_ids[1]);
                }
            }
        }
    }

    #[test]
    fn separating_family_from_identity() {
        let family = separating_family(&IntMatrix::identity(3), 2, 3).unwrap();
        assert_eq!(family.len(), 3);
        for (w, expect) in family.iter().zip([2i64, 4, 6]) {
            assert_eq!(w, &make_witness(WitnessKind::Symmetric, 3, expect).unwrap());
        }
        let traces: Vec<BigInt> = family
            .iter()
            .map(|w| w.mat_mul(&IntMatrix::identity(3)).unwrap().trace())
            .collect();
        assert_eq!(traces, vec![BigInt::from(7), BigInt::from(19), BigInt::from(39)]);
    }

    #[test]
    fn separating_family_with_zero_diagonal() {
        let cycle = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let family = separating_family(&cycle, 3, 2).unwrap();
        for (w, expect) in family.iter().zip([3i64, 6]) {
            assert_eq!(w, &make_witness(WitnessKind::Elementary, 3, expect).unwrap());
            assert_eq!(
                w.mat_mul(&cycle).unwrap().trace(),
                BigInt::from(expect)
            );
        }
    }

    #[test]
    fn separating_family_handles_negative_pivots() {
        let neg = m(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]);
        let family = separating_family(&neg, 2, 4).unwrap();
        let mut traces: Vec<BigInt> = family
            .iter()
            .map(|w| w.mat_mul(&neg).unwrap().trace())
            .collect();
        traces.dedup();
        assert_eq!(traces.len(), 4);
    }

    #[test]
    fn separating_family_outputs_live_in_the_congruence_subgroup() {
        let sl3 = GroupFamily::special_linear(3).unwrap();
        let mut rng = rng_from_seed(11);
        for _ in 0..5 {
            let sample = crate::sampling::random_special_linear_bounded(3, &mut rng, 5);
            for level in [2u64, 3] {
                let family = separating_family(&sample, level, 10).unwrap();
                assert_eq!(family.len(), 10);
                let mut traces = Vec::new();
                for w in &family {
                    assert!(in_congruence_subgroup(w, level).unwrap());
                    assert!(is_member_integral(&sl3, w).unwrap());
                    traces.push(w.mat_mul(&sample).unwrap().trace());
                }
                traces.sort();
                traces.dedup();
                assert_eq!(traces.len(), 10);
            }
        }
    }

    #[test]
    fn separating_family_rejects_small_dimensions() {
        assert!(matches!(
            separating_family(&IntMatrix::identity(2), 2, 3),
            Err(Error::InvalidInput(_))
        ));
        let not_unimodular = m(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(separating_family(&not_unimodular, 2, 3).is_err());
    }

    #[test]
    fn detsign_session_matches_direct_partition() {
        // Character twists enter sessions like any other automorphism.
        let family = GroupFamily::general_linear(2).unwrap();
        let phi = Automorphism::character_twist(Character::<IntMatrix>::DetSign);
        let mut session = CertifySession::new(family, phi, "chartwist:detsign", 200_000, 0);
        let partition = session.partition(3).unwrap().expect("detsign descends");
        assert_eq!(partition.reidemeister_number(), 6);
        let id = ModMatrix::identity(2, 3).unwrap();
        assert_eq!(partition.class_of(&id).unwrap(), partition.class_of_index(0));
    }
}
