//! Twisted conjugacy as a group action on a finite group: for an
//! automorphism phi, the action g.x = g x phi(g)^{-1} partitions the group
//! into twisted classes, and the class count is the Reidemeister number.
//!
//! The production engine unions x with s x phi(s)^{-1} for generators s only,
//! which covers the full action because moves compose: h.(g.x) = (hg).x.
//! A quadratic double-loop oracle over all group elements lives alongside it
//! so the shortcut stays checkable at runtime.

use std::sync::Arc;

use serde::Serialize;

use crate::automorphism::{validate_with_images, Automorphism, ValidationReport};
use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;
use crate::matrix::{mod_mul_into, ModMatrix, SquareMatrix};
use crate::unionfind::UnionFind;

/// The orbit partition of a finite group under a validated automorphism.
/// Class ids run 0..R in ascending order of the representative's canonical
/// entries, and each representative is the lexicographically smallest member
/// of its class, so output is deterministic.
pub struct TwistedPartition {
    group: Arc<FiniteMatrixGroup>,
    automorphism: String,
    validation: ValidationReport,
    class_of: Vec<u32>,
    representatives: Vec<u32>,
    class_sizes: Vec<usize>,
}

/// Compute the partition, validating phi on the group first. Validation
/// failure is the error; the report rides along inside it.
pub fn twisted_partition(
    group: Arc<FiniteMatrixGroup>,
    phi: &Automorphism<ModMatrix>,
    seed: u64,
) -> Result<TwistedPartition> {
    let (report, images) = validate_with_images(phi, &group, seed);
    if !report.passed() {
        return Err(Error::InvalidAutomorphism(Box::new(report)));
    }
    let images = images.expect("passing validation yields images");

    let n = group.order();
    let dim = group.dim();
    let modulus = group.modulus();
    let nn = dim * dim;

    // Per generator s: entries of s and of phi(s)^{-1}.
    let mut gen_bufs: Vec<Vec<u64>> = Vec::new();
    let mut phi_inv_bufs: Vec<Vec<u64>> = Vec::new();
    for &s in group.generator_indices() {
        let mut buf = vec![0u64; nn];
        group.copy_entries_into(s, &mut buf);
        gen_bufs.push(buf);
        let inv = group.inverse_index(images[s as usize]);
        let mut buf = vec![0u64; nn];
        group.copy_entries_into(inv, &mut buf);
        phi_inv_bufs.push(buf);
    }

    let mut uf = UnionFind::new(n);
    let mut x_buf = vec![0u64; nn];
    let mut tmp = vec![0u64; nn];
    let mut moved = vec![0u64; nn];
    for x in 0..n as u32 {
        group.copy_entries_into(x, &mut x_buf);
        for (s_buf, inv_buf) in gen_bufs.iter().zip(&phi_inv_bufs) {
            mod_mul_into(s_buf, &x_buf, dim, modulus, &mut tmp);
            mod_mul_into(&tmp, inv_buf, dim, modulus, &mut moved);
            let t = group
                .lookup_entries(&moved)
                .expect("action moves stay inside the group");
            uf.union(x, t);
        }
    }

    let (class_of, representatives, class_sizes) = label_classes(&group, &mut uf);
    Ok(TwistedPartition {
        automorphism: phi.to_string(),
        validation: report,
        group,
        class_of,
        representatives,
        class_sizes,
    })
}

/// Deterministic labeling: find each component's lexicographically smallest
/// element, sort components by those entries, then number them.
fn label_classes(
    group: &FiniteMatrixGroup,
    uf: &mut UnionFind,
) -> (Vec<u32>, Vec<u32>, Vec<usize>) {
    let n = group.order();
    const NONE: u32 = u32::MAX;
    let mut min_of_root = vec![NONE; n];
    let mut roots: Vec<u32> = Vec::new();
    for x in 0..n as u32 {
        let r = uf.find(x) as usize;
        if min_of_root[r] == NONE {
            roots.push(r as u32);
            min_of_root[r] = x;
        } else if group.entries_cmp(x, min_of_root[r]).is_lt() {
            min_of_root[r] = x;
        }
    }
    roots.sort_unstable_by(|&a, &b| {
        group.entries_cmp(min_of_root[a as usize], min_of_root[b as usize])
    });

    let mut id_of_root = vec![0u32; n];
    let mut representatives = Vec::with_capacity(roots.len());
    for (id, &r) in roots.iter().enumerate() {
        id_of_root[r as usize] = id as u32;
        representatives.push(min_of_root[r as usize]);
    }
    let mut class_of = vec![0u32; n];
    let mut class_sizes = vec![0usize; roots.len()];
    for x in 0..n as u32 {
        let id = id_of_root[uf.find(x) as usize];
        class_of[x as usize] = id;
        class_sizes[id as usize] += 1;
    }
    (class_of, representatives, class_sizes)
}

impl TwistedPartition {
    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<FiniteMatrixGroup> {
        Arc::clone(&self.group)
    }

    pub fn automorphism(&self) -> &str {
        &self.automorphism
    }

    pub fn validation(&self) -> &ValidationReport {
        &self.validation
    }

    pub fn reidemeister_number(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_of_index(&self, idx: u32) -> u32 {
        self.class_of[idx as usize]
    }

    pub fn class_of(&self, x: &ModMatrix) -> Result<u32> {
        let idx = self.group.index_of(x).ok_or(Error::ElementNotInGroup)?;
        Ok(self.class_of[idx as usize])
    }

    pub fn same_twisted_class(&self, x: &ModMatrix, y: &ModMatrix) -> Result<bool> {
        Ok(self.class_of(x)? == self.class_of(y)?)
    }

    /// Element index of the class representative (the class's lex-smallest
    /// canonical form).
    pub fn representative_index(&self, class_id: u32) -> u32 {
        self.representatives[class_id as usize]
    }

    pub fn representative(&self, class_id: u32) -> ModMatrix {
        self.group.element(self.representatives[class_id as usize] as usize)
    }

    /// Re-check the defining stability property and the class equation.
    pub fn verify_stability(&self, phi: &Automorphism<ModMatrix>) -> Result<()> {
        let n = self.group.order();
        for x in 0..n as u32 {
            let xm = self.group.element(x as usize);
            for &s in self.group.generator_indices() {
                let sm = self.group.element(s as usize);
                let moved = sm.mat_mul(&xm)?.mat_mul(&phi.apply(&sm)?.inverse()?)?;
                let t = self.group.index_of(&moved).ok_or(Error::ElementNotInGroup)?;
                if self.class_of[t as usize] != self.class_of[x as usize] {
                    return Err(Error::Verification(format!(
                        "class of element {x} not stable under generator {s}"
                    )));
                }
            }
        }
        if self.class_sizes.iter().sum::<usize>() != n {
            return Err(Error::Verification("class sizes do not sum to the order".into()));
        }
        Ok(())
    }

    pub fn report(&self, automorphism_label: &str) -> PartitionReport {
        PartitionReport {
            group: self.group.descriptor().to_string(),
            automorphism: automorphism_label.to_string(),
            reidemeister_number: self.reidemeister_number(),
            classes: (0..self.class_sizes.len())
                .map(|id| ClassReport {
                    id,
                    size: self.class_sizes[id],
                    representative: self.representative(id as u32).rows(),
                })
                .collect(),
        }
    }
}

/// JSON-facing summary; field order is part of the output contract.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub group: String,
    pub automorphism: String,
    pub reidemeister_number: usize,
    pub classes: Vec<ClassReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub id: usize,
    pub size: usize,
    pub representative: Vec<Vec<u64>>,
}

/// Independent oracle: union x with g x phi(g)^{-1} for every group element
/// g, not just generators. Quadratic; only for cross-checking.
pub fn bruteforce_twisted_class_of(
    group: &FiniteMatrixGroup,
    phi: &Automorphism<ModMatrix>,
) -> Result<Vec<u32>> {
    let n = group.order();
    let mut phi_inv = vec![0u32; n];
    for g in 0..n {
        let img = group
            .index_of(&phi.apply(&group.element(g))?)
            .ok_or(Error::ElementNotInGroup)?;
        phi_inv[g] = group.inverse_index(img);
    }
    let dim = group.dim();
    let modulus = group.modulus();
    let nn = dim * dim;
    let mut uf = UnionFind::new(n);
    let mut g_buf = vec![0u64; nn];
    let mut x_buf = vec![0u64; nn];
    let mut tmp = vec![0u64; nn];
    let mut moved = vec![0u64; nn];
    for x in 0..n as u32 {
        group.copy_entries_into(x, &mut x_buf);
        for g in 0..n as u32 {
            group.copy_entries_into(g, &mut g_buf);
            mod_mul_into(&g_buf, &x_buf, dim, modulus, &mut tmp);
            group.copy_entries_into(phi_inv[g as usize], &mut g_buf);
            mod_mul_into(&tmp, &g_buf, dim, modulus, &mut moved);
            let t = group.lookup_entries(&moved).ok_or(Error::ElementNotInGroup)?;
            uf.union(x, t);
        }
    }
    Ok(label_classes(group, &mut uf).0)
}

/// Ordinary conjugacy classes by double loop, written independently of the
/// twisted machinery (no automorphism involved): unions x with g x g^{-1}.
pub fn conjugacy_class_of_bruteforce(group: &FiniteMatrixGroup) -> Vec<u32> {
    let n = group.order();
    let dim = group.dim();
    let modulus = group.modulus();
    let nn = dim * dim;
    let mut uf = UnionFind::new(n);
    let mut g_buf = vec![0u64; nn];
    let mut x_buf = vec![0u64; nn];
    let mut tmp = vec![0u64; nn];
    let mut moved = vec![0u64; nn];
    for x in 0..n as u32 {
        group.copy_entries_into(x, &mut x_buf);
        for g in 0..n as u32 {
            group.copy_entries_into(g, &mut g_buf);
            mod_mul_into(&g_buf, &x_buf, dim, modulus, &mut tmp);
            group.copy_entries_into(group.inverse_index(g), &mut g_buf);
            mod_mul_into(&tmp, &g_buf, dim, modulus, &mut moved);
            let t = group
                .lookup_entries(&moved)
                .expect("conjugates stay inside the group");
            uf.union(x, t);
        }
    }
    label_classes(group, &mut uf).0
}

/// trace(x * m), constant on twisted classes of the inner automorphism
/// conjugation-by-m: if y = g x (m g^{-1} m^{-1}) then y m = g (x m) g^{-1}.
pub fn inner_trace_invariant<M: SquareMatrix>(x: &M, m: &M) -> Result<M::Scalar> {
    Ok(x.mat_mul(m)?.trace())
}

/// trace(x * j) for the sign or swap conjugator j, constant on twisted
/// classes of conjugation-by-j: if y = g x (j g^{-1} j) then y j = g (x j) g^{-1}.
pub fn sigma_trace_invariant<M: SquareMatrix>(x: &M, j: &M) -> Result<M::Scalar> {
    Ok(x.mat_mul(j)?.trace())
}
