//! Group extensions in finite models: verified normal subgroups, coset
//! arithmetic on the quotient, restriction and descent of automorphisms,
//! and the quantitative fiber bounds relating the three twisted class
//! counts of kernel, total group, and quotient.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::automorphism::{validate_with_images, Automorphism};
use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;
use crate::matrix::ModMatrix;
use crate::orbits::{conjugacy_class_of_bruteforce, twisted_partition};
use crate::sampling::rng_from_seed;
use crate::unionfind::UnionFind;
use rand::Rng;

/// A group together with a verified normal subgroup and the induced coset
/// structure. Coset ids are assigned in order of each coset's smallest
/// element index, and the smallest index doubles as the designated
/// representative, so the quotient layout is deterministic.
pub struct FiniteExtension {
    total: Arc<FiniteMatrixGroup>,
    kernel: Vec<u32>,
    kernel_pos: HashMap<u32, u32>,
    coset_of: Vec<u32>,
    coset_reps: Vec<u32>,
    coset_mul: Vec<Vec<u32>>,
    coset_inv: Vec<u32>,
}

/// An automorphism split along an extension: a permutation of kernel
/// positions and a permutation of coset ids.
#[derive(Clone, Debug)]
pub struct DescendedMaps {
    pub kernel_perm: Vec<u32>,
    pub quotient_perm: Vec<u32>,
}

/// Twisted class counts across an extension together with the observed
/// fiber sizes of the two connecting maps. Serialization order is the
/// output contract.
#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    #[serde(rename = "R_total")]
    pub r_total: usize,
    #[serde(rename = "R_quotient")]
    pub r_quotient: usize,
    #[serde(rename = "R_kernel")]
    pub r_kernel: usize,
    pub kernel_size: usize,
    pub index: usize,
    pub max_fiber_eta: usize,
    pub max_fiber_j: usize,
    pub bounds_hold: bool,
}

/// Collects the elements satisfying `kernel_predicate` and verifies they
/// form a normal subgroup before assembling the coset structure. Failures
/// carry a concrete counterexample.
pub fn build_extension(
    total: Arc<FiniteMatrixGroup>,
    kernel_predicate: impl Fn(&ModMatrix) -> bool,
) -> Result<FiniteExtension> {
    let order = total.order();
    let kernel: Vec<u32> = (0..order as u32)
        .filter(|&i| kernel_predicate(&total.element(i as usize)))
        .collect();

    if kernel.first() != Some(&total.identity_index()) {
        return Err(Error::NotASubgroup(
            "the selected subset misses the identity".into(),
        ));
    }
    let kernel_pos: HashMap<u32, u32> = kernel
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, p as u32))
        .collect();
    for &a in &kernel {
        if !kernel_pos.contains_key(&total.inverse_index(a)) {
            return Err(Error::NotASubgroup(format!(
                "inverse of element {a} leaves the subset"
            )));
        }
        for &b in &kernel {
            if !kernel_pos.contains_key(&total.product_index(a, b)) {
                return Err(Error::NotASubgroup(format!(
                    "product of elements {a} and {b} leaves the subset"
                )));
            }
        }
    }
    for g in 0..order as u32 {
        let ginv = total.inverse_index(g);
        for &n in &kernel {
            let conj = total.product_index(total.product_index(g, n), ginv);
            if !kernel_pos.contains_key(&conj) {
                return Err(Error::NotNormal(format!(
                    "conjugating element {n} by element {g} leaves the subset"
                )));
            }
        }
    }

    // Left cosets, discovered in element order.
    let mut coset_of = vec![u32::MAX; order];
    let mut coset_reps = Vec::new();
    for x in 0..order as u32 {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let id = coset_reps.len() as u32;
        coset_reps.push(x);
        for &n in &kernel {
            coset_of[total.product_index(x, n) as usize] = id;
        }
    }
    let cosets = coset_reps.len();
    if cosets * kernel.len() != order {
        return Err(Error::Verification(format!(
            "coset count {cosets} times kernel size {} misses the group order {order}",
            kernel.len()
        )));
    }

    let coset_mul: Vec<Vec<u32>> = coset_reps
        .iter()
        .map(|&ra| {
            coset_reps
                .iter()
                .map(|&rb| coset_of[total.product_index(ra, rb) as usize])
                .collect()
        })
        .collect();
    // Representative products must agree with every member product.
    for x in 0..order as u32 {
        for y in 0..order as u32 {
            let via_table = coset_mul[coset_of[x as usize] as usize][coset_of[y as usize] as usize];
            if coset_of[total.product_index(x, y) as usize] != via_table {
                return Err(Error::Verification(
                    "coset multiplication is not well-defined".into(),
                ));
            }
        }
    }
    let coset_inv: Vec<u32> = coset_reps
        .iter()
        .map(|&r| coset_of[total.inverse_index(r) as usize])
        .collect();

    Ok(FiniteExtension {
        total,
        kernel,
        kernel_pos,
        coset_of,
        coset_reps,
        coset_mul,
        coset_inv,
    })
}

impl FiniteExtension {
    pub fn total(&self) -> &Arc<FiniteMatrixGroup> {
        &self.total
    }

    pub fn kernel_indices(&self) -> &[u32] {
        &self.kernel
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel.len()
    }

    pub fn quotient_order(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn coset_of(&self, element: u32) -> u32 {
        self.coset_of[element as usize]
    }

    pub fn coset_representative(&self, coset: u32) -> u32 {
        self.coset_reps[coset as usize]
    }

    pub fn coset_product(&self, a: u32, b: u32) -> u32 {
        self.coset_mul[a as usize][b as usize]
    }

    pub fn coset_inverse(&self, a: u32) -> u32 {
        self.coset_inv[a as usize]
    }

    /// Restricts the automorphism to the kernel and pushes it down to the
    /// cosets. The automorphism is validated on the total group first; the
    /// kernel must be carried onto itself or the descent is refused.
    pub fn restrict_and_descend(&self, phi: &Automorphism<ModMatrix>) -> Result<DescendedMaps> {
        let (report, images) = validate_with_images(phi, &self.total, 0);
        if !report.passed() {
            return Err(Error::InvalidAutomorphism(Box::new(report)));
        }
        let images = images.expect("validated automorphisms have image tables");

        let mut kernel_perm = Vec::with_capacity(self.kernel.len());
        for &n in &self.kernel {
            match self.kernel_pos.get(&images[n as usize]) {
                Some(&p) => kernel_perm.push(p),
                None => {
                    return Err(Error::NotInvariant(format!(
                        "kernel element {:?} maps to {:?} outside the kernel",
                        self.total.element(n as usize).rows(),
                        self.total.element(images[n as usize] as usize).rows()
                    )))
                }
            }
        }

        // phi(xN) = phi(x)N once the kernel is preserved; read the induced
        // permutation off the representatives and recheck on every member.
        let cosets = self.coset_reps.len();
        let mut quotient_perm = vec![u32::MAX; cosets];
        for (c, &r) in self.coset_reps.iter().enumerate() {
            quotient_perm[c] = self.coset_of[images[r as usize] as usize];
        }
        for x in 0..self.total.order() {
            let expect = quotient_perm[self.coset_of[x] as usize];
            if self.coset_of[images[x] as usize] != expect {
                return Err(Error::Verification(
                    "descended map disagrees across a coset".into(),
                ));
            }
        }
        let mut seen = vec![false; cosets];
        for &c in &quotient_perm {
            seen[c as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Verification(
                "descended map is not a bijection on cosets".into(),
            ));
        }
        for a in 0..cosets {
            for b in 0..cosets {
                let lhs = quotient_perm[self.coset_mul[a][b] as usize];
                let rhs = self.coset_mul[quotient_perm[a] as usize][quotient_perm[b] as usize];
                if lhs != rhs {
                    return Err(Error::Verification(
                        "descended map is not multiplicative on cosets".into(),
                    ));
                }
            }
        }

        Ok(DescendedMaps {
            kernel_perm,
            quotient_perm,
        })
    }

    fn kernel_twisted_classes(&self, kernel_perm: &[u32]) -> Vec<u32> {
        let k = self.kernel.len();
        let mut uf = UnionFind::new(k);
        for p in 0..k {
            let x = self.kernel[p];
            for q in 0..k {
                let n = self.kernel[q];
                let phin = self.kernel[kernel_perm[q] as usize];
                let moved = self.total.product_index(
                    self.total.product_index(n, x),
                    self.total.inverse_index(phin),
                );
                uf.union(p as u32, self.kernel_pos[&moved]);
            }
        }
        normalize_classes(k, &mut uf)
    }

    fn quotient_twisted_classes(&self, quotient_perm: &[u32]) -> Vec<u32> {
        let c = self.coset_reps.len();
        let mut uf = UnionFind::new(c);
        for x in 0..c {
            for g in 0..c {
                let phig_inv = self.coset_inv[quotient_perm[g] as usize] as usize;
                let moved = self.coset_mul[self.coset_mul[g][x] as usize][phig_inv];
                uf.union(x as u32, moved);
            }
        }
        normalize_classes(c, &mut uf)
    }

    /// Computes the three twisted class counts and checks the quantitative
    /// content of the connecting maps: classes of the quotient are hit by
    /// classes of the total group (at most `kernel_size` per fiber), and
    /// kernel classes land in total classes (at most `index` per fiber).
    pub fn fiber_bounds_check(
        &self,
        phi: &Automorphism<ModMatrix>,
        seed: u64,
    ) -> Result<BoundsReport> {
        let maps = self.restrict_and_descend(phi)?;
        let partition = twisted_partition(Arc::clone(&self.total), phi, seed)?;
        let r_total = partition.reidemeister_number();
        let kernel_classes = self.kernel_twisted_classes(&maps.kernel_perm);
        let quotient_classes = self.quotient_twisted_classes(&maps.quotient_perm);
        let r_kernel = class_count(&kernel_classes);
        let r_quotient = class_count(&quotient_classes);

        // Total classes push forward to quotient classes along the
        // projection; the map must be single-valued and onto.
        let mut image_of_class = vec![u32::MAX; r_total];
        for x in 0..self.total.order() {
            let t = partition.class_of_index(x as u32) as usize;
            let qc = quotient_classes[self.coset_of[x] as usize];
            if image_of_class[t] == u32::MAX {
                image_of_class[t] = qc;
            } else if image_of_class[t] != qc {
                return Err(Error::Verification(
                    "projection of twisted classes is not well-defined".into(),
                ));
            }
        }
        let mut fiber_eta = vec![0usize; r_quotient];
        for &qc in &image_of_class {
            fiber_eta[qc as usize] += 1;
        }
        let surjective = fiber_eta.iter().all(|&f| f > 0);
        let max_fiber_eta = fiber_eta.iter().copied().max().unwrap_or(0);

        // Kernel classes embed into total classes by inclusion.
        let mut fiber_j = vec![0usize; r_total];
        let mut image_of_kernel_class = vec![u32::MAX; r_kernel];
        for (p, &n) in self.kernel.iter().enumerate() {
            let kc = kernel_classes[p] as usize;
            let t = partition.class_of_index(n);
            if image_of_kernel_class[kc] == u32::MAX {
                image_of_kernel_class[kc] = t;
                fiber_j[t as usize] += 1;
            } else if image_of_kernel_class[kc] != t {
                return Err(Error::Verification(
                    "kernel classes split across total classes".into(),
                ));
            }
        }
        let max_fiber_j = fiber_j.iter().copied().max().unwrap_or(0);

        let kernel_size = self.kernel.len();
        let index = self.quotient_order();
        let bounds_hold = surjective
            && r_quotient <= r_total
            && r_total <= kernel_size * r_quotient
            && r_kernel <= index * r_total
            && max_fiber_eta <= kernel_size
            && max_fiber_j <= index;

        Ok(BoundsReport {
            r_total,
            r_quotient,
            r_kernel,
            kernel_size,
            index,
            max_fiber_eta,
            max_fiber_j,
            bounds_hold,
        })
    }
}

fn normalize_classes(n: usize, uf: &mut UnionFind) -> Vec<u32> {
    let mut label = HashMap::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n as u32 {
        let root = uf.find(i);
        let next = label.len() as u32;
        out.push(*label.entry(root).or_insert(next));
    }
    out
}

fn class_count(classes: &[u32]) -> usize {
    classes.iter().map(|&c| c as usize).max().map_or(0, |m| m + 1)
}

/// Verifies that twisting by a fixed element is the same partition as
/// ordinary conjugacy shifted by that element: x and y are twisted-related
/// exactly when x*gamma and y*gamma are conjugate, and the class counts
/// agree. Pairs are checked exhaustively up to order 500, sampled above.
pub fn inner_equals_conjugacy_check(
    group: &Arc<FiniteMatrixGroup>,
    gamma: &ModMatrix,
    seed: u64,
) -> Result<bool> {
    let gi = group.index_of(gamma).ok_or(Error::ElementNotInGroup)?;
    let phi = Automorphism::inner(gamma.clone())?;
    let partition = twisted_partition(Arc::clone(group), &phi, seed)?;
    let conj = conjugacy_class_of_bruteforce(group);
    let classes = class_count(&conj);
    if partition.reidemeister_number() != classes {
        return Ok(false);
    }
    let order = group.order() as u32;
    let agree = |x: u32, y: u32| {
        let twisted = partition.class_of_index(x) == partition.class_of_index(y);
        let shifted = conj[group.product_index(x, gi) as usize]
            == conj[group.product_index(y, gi) as usize];
        twisted == shifted
    };
    if order <= 500 {
        for x in 0..order {
            for y in 0..order {
                if !agree(x, y) {
                    return Ok(false);
                }
            }
        }
    } else {
        let mut rng = rng_from_seed(seed);
        for _ in 0..20_000 {
            let x = rng.gen_range(0..order);
            let y = rng.gen_range(0..order);
            if !agree(x, y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Conjugacy class counts of finite groups grow (very slowly) with the
/// order; checks the classical doubly logarithmic lower bound.
pub fn brauer_bound_check(group: &FiniteMatrixGroup) -> Result<bool> {
    if group.order() < 3 {
        return Err(Error::InvalidInput(
            "the class-count bound needs order at least 3".into(),
        ));
    }
    let classes = class_count(&conjugacy_class_of_bruteforce(group)) as f64;
    Ok(classes >= (group.order() as f64).ln().ln())
}
