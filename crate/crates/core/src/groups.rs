//! Finite congruence quotients of SL(n, Z), GL(n, Z), and Sp(2n, Z),
//! enumerated explicitly as indexed element tables.
//!
//! Construction is breadth-first closure from reduced generator sets. For a
//! prime modulus the resulting order is checked against the classical order
//! formulas, so the generator choices are self-verifying.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{check_modulus, mod_inverse_into, mod_mul_into, IntMatrix, ModMatrix};
use crate::sampling::rng_from_seed;

/// Default ceiling on enumerated elements; Sp(4, Z/3) at 51,840 fits with
/// room while runaway inputs fail fast.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

const FULL_CHECK_LIMIT: usize = 2000;
const SAMPLED_PAIRS: usize = 100_000;

// ---------------------------------------------------------------------------
// Group families
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    SpecialLinear,
    GeneralLinear,
    Symplectic,
}

impl GroupKind {
    pub fn token(self) -> &'static str {
        match self {
            GroupKind::SpecialLinear => "sl",
            GroupKind::GeneralLinear => "gl",
            GroupKind::Symplectic => "sp",
        }
    }
}

/// A classical family together with its matrix dimension (2n for Sp).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupFamily {
    kind: GroupKind,
    dim: usize,
}

impl GroupFamily {
    pub fn special_linear(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("sl requires n >= 2, got {n}")));
        }
        Ok(Self { kind: GroupKind::SpecialLinear, dim: n })
    }

    pub fn general_linear(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("gl requires n >= 2, got {n}")));
        }
        Ok(Self { kind: GroupKind::GeneralLinear, dim: n })
    }

    pub fn symplectic(two_n: usize) -> Result<Self> {
        if two_n < 2 || two_n % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "sp requires an even dimension >= 2, got {two_n}"
            )));
        }
        Ok(Self { kind: GroupKind::Symplectic, dim: two_n })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn descriptor(&self, modulus: u64) -> String {
        format!("{}:{}:{}", self.kind.token(), self.dim, modulus)
    }

    /// The fixed alternating form for Sp: block-diagonal [[0,1],[-1,0]].
    pub fn symplectic_form(&self) -> Option<IntMatrix> {
        match self.kind {
            GroupKind::Symplectic => Some(IntMatrix::from_fn(self.dim, |i, j| {
                if i % 2 == 0 && j == i + 1 {
                    BigInt::one()
                } else if i % 2 == 1 && j + 1 == i {
                    BigInt::from(-1)
                } else {
                    BigInt::zero()
                }
            })),
            _ => None,
        }
    }

    /// Generators over the integers (transvections; for GL also diag(-1, 1, ...)).
    /// Inverses are included so random nonnegative words explore the group.
    pub fn integral_generators(&self) -> Vec<IntMatrix> {
        let n = self.dim;
        let mut gens = Vec::new();
        match self.kind {
            GroupKind::SpecialLinear | GroupKind::GeneralLinear => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            for c in [1i64, -1] {
                                gens.push(crate::sampling::transvection(n, i, j, &BigInt::from(c)));
                            }
                        }
                    }
                }
                if self.kind == GroupKind::GeneralLinear {
                    let mut d = vec![BigInt::one(); n];
                    d[0] = BigInt::from(-1);
                    gens.push(IntMatrix::diagonal(&d));
                }
            }
            GroupKind::Symplectic => {
                for v in basic_transvection_vectors(n) {
                    gens.push(symplectic_transvection_int(n, &v, 1));
                    gens.push(symplectic_transvection_int(n, &v, -1));
                }
            }
        }
        gens
    }

    fn quotient_generators(&self, m: u64, extended_sp: bool) -> Result<Vec<ModMatrix>> {
        let n = self.dim;
        let mut gens = Vec::new();
        match self.kind {
            GroupKind::SpecialLinear | GroupKind::GeneralLinear => {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            let mut e = ModMatrix::identity(n, m)?.entries().to_vec();
                            e[i * n + j] = 1 % m;
                            gens.push(ModMatrix::new(n, m, e)?);
                        }
                    }
                }
                if self.kind == GroupKind::GeneralLinear {
                    for u in 2..m {
                        if u64::gcd(&u, &m) == 1 {
                            let mut e = ModMatrix::identity(n, m)?.entries().to_vec();
                            e[0] = u;
                            gens.push(ModMatrix::new(n, m, e)?);
                        }
                    }
                }
            }
            GroupKind::Symplectic => {
                let vectors = if extended_sp {
                    all_nonzero_vectors(n, m)
                } else {
                    basic_transvection_vectors(n)
                        .into_iter()
                        .map(|v| v.into_iter().map(|c| (c as u64) % m).collect())
                        .collect()
                };
                for v in vectors {
                    gens.push(symplectic_transvection_mod(n, m, &v)?);
                }
            }
        }
        Ok(gens)
    }
}

/// Standard basis vectors followed by pairwise sums, as 0/1 vectors.
fn basic_transvection_vectors(n: usize) -> Vec<Vec<i64>> {
    let mut vs = Vec::new();
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        vs.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v[j] = 1;
            vs.push(v);
        }
    }
    vs
}

fn all_nonzero_vectors(n: usize, m: u64) -> Vec<Vec<u64>> {
    let total = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    assert!(total <= 1 << 24, "extended transvection set only used for small moduli");
    let mut vs = Vec::new();
    let mut v = vec![0u64; n];
    loop {
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            v[pos] += 1;
            if v[pos] < m {
                break;
            }
            v[pos] = 0;
            if pos == 0 {
                return vs;
            }
        }
        if v.iter().any(|&c| c != 0) {
            vs.push(v.clone());
        }
    }
}

/// Row vector v^T * J0 over the integers for the fixed form.
fn form_row_int(n: usize, v: &[i64]) -> Vec<i64> {
    let mut w = vec![0i64; n];
    for i in (0..n).step_by(2) {
        // J0 rows: row 2i is e_{2i+1}, row 2i+1 is -e_{2i} (0-based pairs).
        w[i + 1] += v[i];
        w[i] -= v[i + 1];
    }
    w
}

/// The symplectic transvection x -> x + c * beta(x, v) * v as a matrix:
/// I - c * v * (v^T J0).
pub fn symplectic_transvection_int(n: usize, v: &[i64], c: i64) -> IntMatrix {
    let w = form_row_int(n, v);
    IntMatrix::from_fn(n, |i, j| {
        let delta = if i == j { 1 } else { 0 };
        BigInt::from(delta - c * v[i] * w[j])
    })
}

fn symplectic_transvection_mod(n: usize, m: u64, v: &[u64]) -> Result<ModMatrix> {
    let mut w = vec![0u64; n];
    for i in (0..n).step_by(2) {
        w[i + 1] = (w[i + 1] + v[i]) % m;
        w[i] = (w[i] + m - v[i + 1] % m) % m;
    }
    let mut entries = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let delta = u64::from(i == j);
            let prod = ((u128::from(v[i]) * u128::from(w[j])) % u128::from(m)) as u64;
            entries[i * n + j] = (delta + m - prod) % m;
        }
    }
    ModMatrix::new(n, m, entries)
}

/// Parse a descriptor of the form `sl:n:m`, `gl:n:m`, or `sp:2n:m`.
pub fn parse_group_descriptor(s: &str) -> Result<(GroupFamily, u64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "group descriptor must look like sl:2:3, got {s:?}"
        )));
    }
    let dim: usize = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad dimension in {s:?}")))?;
    let modulus: u64 = parts[2]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad modulus in {s:?}")))?;
    check_modulus(modulus)?;
    let family = match parts[0] {
        "sl" => GroupFamily::special_linear(dim)?,
        "gl" => GroupFamily::general_linear(dim)?,
        "sp" => GroupFamily::symplectic(dim)?,
        other => {
            return Err(Error::InvalidInput(format!("unknown group family {other:?}")));
        }
    };
    Ok((family, modulus))
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Classical order of the family over the field with q elements; `None` when
/// the value does not fit in u128.
pub fn prime_order_formula(family: &GroupFamily, q: u64) -> Option<u128> {
    let q = u128::from(q);
    let n = family.dim as u32;
    match family.kind {
        GroupKind::SpecialLinear | GroupKind::GeneralLinear => {
            let qn = q.checked_pow(n)?;
            let mut acc: u128 = 1;
            for i in 0..n {
                acc = acc.checked_mul(qn - q.checked_pow(i)?)?;
            }
            if family.kind == GroupKind::SpecialLinear {
                Some(acc / (q - 1))
            } else {
                Some(acc)
            }
        }
        GroupKind::Symplectic => {
            let half = n / 2;
            let mut acc = q.checked_pow(half * half)?;
            for i in 1..=half {
                acc = acc.checked_mul(q.checked_pow(2 * i)? - 1)?;
            }
            Some(acc)
        }
    }
}

// ---------------------------------------------------------------------------
// Integral membership
// ---------------------------------------------------------------------------

/// Exact membership of an integer matrix in the integral group.
pub fn is_member_integral(family: &GroupFamily, x: &IntMatrix) -> Result<bool> {
    if x.dim() != family.dim {
        return Err(Error::DimensionMismatch { expected: family.dim, got: x.dim() });
    }
    let det = x.det();
    Ok(match family.kind {
        GroupKind::SpecialLinear => det.is_one(),
        GroupKind::GeneralLinear => det.abs().is_one(),
        GroupKind::Symplectic => {
            let j0 = family.symplectic_form().expect("symplectic family has a form");
            det.is_one() && x.transpose().mat_mul(&j0)?.mat_mul(x)? == j0
        }
    })
}

/// Does x lie in the principal congruence subgroup of level m (x = I mod m)?
pub fn in_congruence_subgroup(x: &IntMatrix, m: u64) -> Result<bool> {
    Ok(x.reduce_mod(m)?.is_identity())
}

// ---------------------------------------------------------------------------
// Element storage
// ---------------------------------------------------------------------------

/// Append-only table of canonical matrix entry vectors with O(1) lookup.
/// Entries pack into a single big-endian u64 word whenever they fit, so the
/// numeric order of packed keys equals lexicographic order of entries.
struct ElementStore {
    nn: usize,
    modulus: u64,
    bits: Option<u32>,
    packed: Vec<u64>,
    packed_index: HashMap<u64, u32>,
    wide: Vec<u64>,
    wide_index: HashMap<Box<[u64]>, u32>,
}

impl ElementStore {
    fn new(nn: usize, modulus: u64) -> Self {
        let per_entry = 64 - (modulus - 1).leading_zeros();
        let per_entry = per_entry.max(1);
        let bits = if (per_entry as usize) * nn <= 64 { Some(per_entry) } else { None };
        Self {
            nn,
            modulus,
            bits,
            packed: Vec::new(),
            packed_index: HashMap::new(),
            wide: Vec::new(),
            wide_index: HashMap::new(),
        }
    }

    fn len(&self) -> usize {
        if self.bits.is_some() {
            self.packed.len()
        } else {
            self.wide.len() / self.nn
        }
    }

    fn pack(&self, entries: &[u64]) -> u64 {
        let bits = self.bits.expect("pack only in packed mode");
        let mut key = 0u64;
        for &e in entries {
            key = (key << bits) | e;
        }
        key
    }

    fn unpack(&self, mut key: u64, out: &mut [u64]) {
        let bits = self.bits.expect("unpack only in packed mode");
        let mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        for slot in out.iter_mut().rev() {
            *slot = key & mask;
            key >>= bits;
        }
    }

    /// Insert canonical entries; returns (index, newly_inserted).
    fn insert(&mut self, entries: &[u64]) -> (u32, bool) {
        debug_assert_eq!(entries.len(), self.nn);
        debug_assert!(entries.iter().all(|&e| e < self.modulus));
        if self.bits.is_some() {
            let key = self.pack(entries);
            if let Some(&idx) = self.packed_index.get(&key) {
                return (idx, false);
            }
            let idx = self.packed.len() as u32;
            self.packed.push(key);
            self.packed_index.insert(key, idx);
            (idx, true)
        } else {
            if let Some(&idx) = self.wide_index.get(entries) {
                return (idx, false);
            }
            let idx = (self.wide.len() / self.nn) as u32;
            self.wide.extend_from_slice(entries);
            self.wide_index.insert(entries.into(), idx);
            (idx, true)
        }
    }

    fn get(&self, entries: &[u64]) -> Option<u32> {
        if self.bits.is_some() {
            self.packed_index.get(&self.pack(entries)).copied()
        } else {
            self.wide_index.get(entries).copied()
        }
    }

    fn copy_entries(&self, idx: u32, out: &mut [u64]) {
        if self.bits.is_some() {
            self.unpack(self.packed[idx as usize], out);
        } else {
            let start = idx as usize * self.nn;
            out.copy_from_slice(&self.wide[start..start + self.nn]);
        }
    }

    /// Lexicographic comparison of the canonical entries of two elements.
    /// In packed mode the big-endian key order is exactly entry order.
    fn entries_cmp(&self, a: u32, b: u32) -> std::cmp::Ordering {
        if self.bits.is_some() {
            self.packed[a as usize].cmp(&self.packed[b as usize])
        } else {
            let (a, b) = (a as usize * self.nn, b as usize * self.nn);
            self.wide[a..a + self.nn].cmp(&self.wide[b..b + self.nn])
        }
    }
}

// ---------------------------------------------------------------------------
// FiniteMatrixGroup
// ---------------------------------------------------------------------------

/// A finite group of invertible matrices over Z/m, fully enumerated and
/// indexed. Index 0 is always the identity. Immutable once built.
pub struct FiniteMatrixGroup {
    descriptor: String,
    family: Option<GroupFamily>,
    dim: usize,
    modulus: u64,
    store: ElementStore,
    generators: Vec<u32>,
    inverses: Vec<u32>,
}

impl FiniteMatrixGroup {
    /// Enumerate the full congruence quotient of the family mod m. For prime
    /// m the order is checked against the classical formula; for Sp a failed
    /// check retries with the extended transvection set before reporting.
    pub fn build_quotient(family: &GroupFamily, m: u64, element_cap: usize) -> Result<Self> {
        check_modulus(m)?;
        let descriptor = family.descriptor(m);
        let gens = family.quotient_generators(m, false)?;
        let mut group = Self::closure(descriptor.clone(), Some(*family), family.dim, m, &gens, element_cap)?;
        if is_prime(m) {
            if let Some(expected) = prime_order_formula(family, m) {
                if group.order() as u128 != expected
                    && family.kind == GroupKind::Symplectic
                {
                    let gens = family.quotient_generators(m, true)?;
                    group = Self::closure(descriptor, Some(*family), family.dim, m, &gens, element_cap)?;
                }
                if group.order() as u128 != expected {
                    return Err(Error::Verification(format!(
                        "order {} of {} does not match the classical formula {}",
                        group.order(),
                        group.descriptor,
                        expected
                    )));
                }
            }
        }
        Ok(group)
    }

    /// Closure of arbitrary invertible generators over a common modulus.
    pub fn from_generators(
        descriptor: impl Into<String>,
        generators: &[ModMatrix],
        element_cap: usize,
    ) -> Result<Self> {
        let descriptor = descriptor.into();
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidInput("from_generators needs at least one generator".into()))?;
        Self::closure(descriptor, None, first.dim(), first.modulus(), generators, element_cap)
    }

    /// The one-element group at the given shape.
    pub fn trivial(dim: usize, modulus: u64) -> Result<Self> {
        Self::closure(format!("trivial:{dim}:{modulus}"), None, dim, modulus, &[], usize::MAX)
    }

    fn closure(
        descriptor: String,
        family: Option<GroupFamily>,
        dim: usize,
        modulus: u64,
        generators: &[ModMatrix],
        element_cap: usize,
    ) -> Result<Self> {
        check_modulus(modulus)?;
        let nn = dim * dim;
        let mut store = ElementStore::new(nn, modulus);
        let identity = ModMatrix::identity(dim, modulus)?;
        let (id_idx, _) = store.insert(identity.entries());
        debug_assert_eq!(id_idx, 0);

        let mut gen_bufs: Vec<Vec<u64>> = Vec::new();
        let mut gen_indices = Vec::new();
        for g in generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.dim() });
            }
            if g.modulus() != modulus {
                return Err(Error::ModulusMismatch { left: modulus, right: g.modulus() });
            }
            // Reject singular generators up front; closure needs a group.
            g.inverse()?;
            let (idx, _) = store.insert(g.entries());
            if idx != 0 && !gen_indices.contains(&idx) {
                gen_indices.push(idx);
                gen_bufs.push(g.entries().to_vec());
            }
        }

        let mut x_buf = vec![0u64; nn];
        let mut prod = vec![0u64; nn];
        let mut cursor: usize = 0;
        while cursor < store.len() {
            store.copy_entries(cursor as u32, &mut x_buf);
            for g in &gen_bufs {
                mod_mul_into(&x_buf, g, dim, modulus, &mut prod);
                let (_, new) = store.insert(&prod);
                if new && store.len() > element_cap {
                    return Err(Error::ResourceLimit {
                        limit: element_cap,
                        reached: store.len(),
                    });
                }
            }
            cursor += 1;
        }

        // Inverse table; doubles as the inverse-closure check.
        let mut inverses = Vec::with_capacity(store.len());
        let mut inv_buf = vec![0u64; nn];
        for idx in 0..store.len() as u32 {
            store.copy_entries(idx, &mut x_buf);
            mod_inverse_into(&x_buf, dim, modulus, &mut inv_buf)?;
            let j = store.get(&inv_buf).ok_or_else(|| {
                Error::Verification(format!("inverse of element {idx} missing from closure"))
            })?;
            inverses.push(j);
        }

        let group = Self {
            descriptor,
            family,
            dim,
            modulus,
            store,
            generators: gen_indices,
            inverses,
        };
        group.closure_spot_check()?;
        Ok(group)
    }

    /// Product closure check: exhaustive for small groups, seeded sampling
    /// otherwise.
    fn closure_spot_check(&self) -> Result<()> {
        let n = self.order();
        let nn = self.dim * self.dim;
        let mut a = vec![0u64; nn];
        let mut b = vec![0u64; nn];
        let mut prod = vec![0u64; nn];
        let mut check = |i: u32, j: u32, store: &ElementStore| -> Result<()> {
            store.copy_entries(i, &mut a);
            store.copy_entries(j, &mut b);
            mod_mul_into(&a, &b, self.dim, self.modulus, &mut prod);
            if store.get(&prod).is_none() {
                return Err(Error::Verification(format!(
                    "product of elements {i} and {j} escapes the closure"
                )));
            }
            Ok(())
        };
        if n <= FULL_CHECK_LIMIT {
            for i in 0..n as u32 {
                for j in 0..n as u32 {
                    check(i, j, &self.store)?;
                }
            }
        } else {
            let mut rng = rng_from_seed(0);
            for _ in 0..SAMPLED_PAIRS {
                let i = rng.gen_range(0..n as u32);
                let j = rng.gen_range(0..n as u32);
                check(i, j, &self.store)?;
            }
        }
        Ok(())
    }

    /// Block-diagonal direct product. Factors over different moduli are
    /// lifted to the least common multiple; each factor's modulus must carry
    /// the full power of every shared prime (otherwise the lift that is the
    /// identity on the complementary part does not exist).
    pub fn direct_product(a: &Self, b: &Self, element_cap: usize) -> Result<Self> {
        let l = lcm_u64(a.modulus, b.modulus)?;
        let dim = a.dim + b.dim;
        let mut gens = Vec::new();
        for &gi in &a.generators {
            gens.push(embed_block(&a.element(gi as usize), a.dim, b.dim, true, l)?);
        }
        for &gi in &b.generators {
            gens.push(embed_block(&b.element(gi as usize), b.dim, a.dim, false, l)?);
        }
        let descriptor = format!("product({},{})", a.descriptor, b.descriptor);
        let group = if gens.is_empty() {
            Self::trivial(dim, l)?
        } else {
            Self::closure(descriptor.clone(), None, dim, l, &gens, element_cap)?
        };
        let expected = (a.order() as u128) * (b.order() as u128);
        if group.order() as u128 != expected {
            return Err(Error::Verification(format!(
                "direct product order {} does not equal {} * {}",
                group.order(),
                a.order(),
                b.order()
            )));
        }
        Ok(group)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn family(&self) -> Option<&GroupFamily> {
        self.family.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.store.len()
    }

    pub fn identity_index(&self) -> u32 {
        0
    }

    pub fn generator_indices(&self) -> &[u32] {
        &self.generators
    }

    pub fn inverse_index(&self, idx: u32) -> u32 {
        self.inverses[idx as usize]
    }

    pub fn element(&self, idx: usize) -> ModMatrix {
        let mut buf = vec![0u64; self.dim * self.dim];
        self.store.copy_entries(idx as u32, &mut buf);
        ModMatrix::from_raw(self.dim, self.modulus, buf)
    }

    pub fn index_of(&self, x: &ModMatrix) -> Option<u32> {
        if x.dim() != self.dim || x.modulus() != self.modulus {
            return None;
        }
        self.store.get(x.entries())
    }

    pub fn contains(&self, x: &ModMatrix) -> bool {
        self.index_of(x).is_some()
    }

    /// Index of the product of two elements. Panics if closure is violated,
    /// which construction rules out.
    pub fn product_index(&self, i: u32, j: u32) -> u32 {
        let nn = self.dim * self.dim;
        let mut a = vec![0u64; nn];
        let mut b = vec![0u64; nn];
        let mut prod = vec![0u64; nn];
        self.store.copy_entries(i, &mut a);
        self.store.copy_entries(j, &mut b);
        mod_mul_into(&a, &b, self.dim, self.modulus, &mut prod);
        self.store.get(&prod).expect("closure contains all products")
    }

    /// Indices of elements commuting with everything.
    pub fn center(&self) -> Vec<u32> {
        (0..self.order() as u32)
            .filter(|&z| {
                self.generators
                    .iter()
                    .all(|&g| self.product_index(z, g) == self.product_index(g, z))
            })
            .collect()
    }

    pub(crate) fn copy_entries_into(&self, idx: u32, out: &mut [u64]) {
        self.store.copy_entries(idx, out);
    }

    pub(crate) fn lookup_entries(&self, entries: &[u64]) -> Option<u32> {
        self.store.get(entries)
    }

    pub(crate) fn entries_cmp(&self, a: u32, b: u32) -> std::cmp::Ordering {
        self.store.entries_cmp(a, b)
    }
}

fn lcm_u64(a: u64, b: u64) -> Result<u64> {
    let l = a / u64::gcd(&a, &b);
    let l = l
        .checked_mul(b)
        .ok_or_else(|| Error::InvalidInput("modulus lcm overflows".into()))?;
    for m in [a, b] {
        let cof = l / m;
        if u64::gcd(&m, &cof) != 1 {
            return Err(Error::InvalidInput(format!(
                "cannot combine moduli {a} and {b}: {m} shares a prime with its cofactor {cof} in lcm {l}"
            )));
        }
    }
    Ok(l)
}

/// CRT-lift a factor element from its modulus to l (identity on the
/// complementary part) and place it block-diagonally; `first` selects the
/// leading block.
fn embed_block(x: &ModMatrix, own: usize, other: usize, first: bool, l: u64) -> Result<ModMatrix> {
    let m = x.modulus();
    let cof = l / m;
    let dim = own + other;
    let lift = |e: u64, diag: bool| -> u64 {
        if cof == 1 {
            return e;
        }
        // y = e mod m, y = (diag ? 1 : 0) mod cof.
        let alpha = crt_unit(cof, m);
        let beta = crt_unit(m, cof);
        let a = (u128::from(e) * u128::from(cof) % u128::from(l)) * u128::from(alpha) % u128::from(l);
        let d = u128::from(u64::from(diag)) * u128::from(m) % u128::from(l) * u128::from(beta)
            % u128::from(l);
        ((a + d) % u128::from(l)) as u64
    };
    let off = if first { 0 } else { other };
    let mut entries = vec![0u64; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let in_block = i >= off && i < off + own && j >= off && j < off + own;
            entries[i * dim + j] = if in_block {
                lift(x.get(i - off, j - off), i == j)
            } else if i == j {
                1 % l
            } else {
                0
            };
        }
    }
    ModMatrix::new(dim, l, entries)
}

/// Inverse of `a` modulo `m`, for coprime inputs (checked by lcm_u64).
fn crt_unit(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (i128::from(m), i128::from(a % m));
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(i128::from(m)) as u64
}
