//! Discriminant groups A_L = L^v / L with their Q/2Z quadratic forms,
//! divisibility residues, and the two Eichler-criterion orbit tests.
//!
//! Equivalence here is decided by invariants only (square and discriminant
//! residue); no isometry matrix is ever produced.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{Class, Lattice, Sublattice};
use crate::matrix::{int, smith_normal_form, Int, Rat, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EichlerError {
    /// The lattice carries no verified U^2 split, so the criterion of the
    /// Eichler lemmas does not apply and we refuse to answer.
    NoU2Witness,
    NotPrimitive,
    RankTooLarge,
    ZeroVector,
}

impl fmt::Display for EichlerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EichlerError::NoU2Witness => {
                write!(f, "lattice has no certified split of enough hyperbolic planes")
            }
            EichlerError::NotPrimitive => write!(f, "class is not primitive"),
            EichlerError::RankTooLarge => {
                write!(f, "sublattice rank exceeds the certified hyperbolic-plane count minus one")
            }
            EichlerError::ZeroVector => write!(f, "zero vector not allowed here"),
        }
    }
}

/// Finite group L^v/L presented by invariant factors, with generator lifts
/// in L-coordinates tensor Q and the induced Q/2Z quadratic form.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    invariant_factors: Vec<Int>,
    generator_lifts: Vec<RatVector>,
    /// Pairwise rational Gram of the lifts, so form values come from exact
    /// arithmetic without re-touching the ambient lattice.
    lift_gram: Vec<Vec<Rat>>,
    /// Rows of u (from the Smith form u*G*v = d) for the factors > 1,
    /// used to map integer vectors to components.
    projection_rows: Vec<Vec<Int>>,
}

/// Element of a discriminant group, components reduced into [0, factor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscElement {
    components: Vec<Int>,
}

impl DiscElement {
    pub fn components(&self) -> &[Int] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }
}

impl DiscriminantGroup {
    /// Order of the group; equals |det Gram|.
    pub fn order(&self) -> Int {
        let mut o = Int::one();
        for f in &self.invariant_factors {
            o *= f;
        }
        o
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn generator_lifts(&self) -> &[RatVector] {
        &self.generator_lifts
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn identity(&self) -> DiscElement {
        DiscElement {
            components: alloc::vec![Int::zero(); self.invariant_factors.len()],
        }
    }

    fn reduce(&self, components: Vec<Int>) -> DiscElement {
        let components = components
            .into_iter()
            .zip(&self.invariant_factors)
            .map(|(c, f)| c.mod_floor(f))
            .collect();
        DiscElement { components }
    }

    /// Value of the quadratic form on an element, as an exact rational
    /// reduced mod 2Z into [0, 2).
    pub fn quadratic_value(&self, e: &DiscElement) -> Rat {
        let mut acc = Rat::zero();
        for (i, a) in e.components.iter().enumerate() {
            for (j, b) in e.components.iter().enumerate() {
                acc += Rat::from(a * b) * &self.lift_gram[i][j];
            }
        }
        reduce_mod_2z(acc)
    }

    /// The full value table q: A_L -> Q/2Z, enumerated in mixed-radix order
    /// over the invariant factors. Only sensible for small groups; every
    /// lattice in this crate has |A_L| at most a few dozen.
    pub fn form_values(&self) -> Vec<(DiscElement, Rat)> {
        let mut out = Vec::new();
        let k = self.invariant_factors.len();
        let mut current = alloc::vec![Int::zero(); k];
        loop {
            let e = DiscElement {
                components: current.clone(),
            };
            let v = self.quadratic_value(&e);
            out.push((e, v));
            // Mixed-radix increment.
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                current[i] += 1;
                if current[i] < self.invariant_factors[i] {
                    break;
                }
                current[i] = Int::zero();
                i += 1;
            }
        }
    }
}

fn reduce_mod_2z(x: Rat) -> Rat {
    let two = Rat::from(int(2));
    let q = (&x / &two).floor();
    x - q * two
}

/// Discriminant group of a nondegenerate even lattice, via the Smith
/// normal form of the Gram matrix.
pub fn discriminant_group(l: &Lattice) -> DiscriminantGroup {
    let snf = smith_normal_form(l.gram());
    let n = l.rank();
    let u_inv = crate::matrix::inverse_rational(&snf.u);
    let g_inv = crate::matrix::inverse_rational(l.gram());

    let mut invariant_factors = Vec::new();
    let mut generator_lifts = Vec::new();
    let mut projection_rows = Vec::new();
    for i in 0..n {
        let d = snf.d.at(i, i);
        if d.abs() <= Int::one() {
            continue;
        }
        invariant_factors.push(d.clone());
        projection_rows.push(snf.u.row_vec(i));
        // Lift of the i-th generator: G^{-1} * U^{-1} * e_i.
        let col: Vec<Rat> = (0..n).map(|r| u_inv[r][i].clone()).collect();
        let lift: Vec<Rat> = (0..n)
            .map(|r| {
                let mut acc = Rat::zero();
                for c in 0..n {
                    acc += &g_inv[r][c] * &col[c];
                }
                acc
            })
            .collect();
        generator_lifts.push(RatVector::new(lift));
    }
    // Divisibility chain puts the factors > 1 at the tail, in order.
    let k = invariant_factors.len();
    let mut lift_gram = alloc::vec![alloc::vec![Rat::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = Rat::zero();
            let gi = generator_lifts[i].entries();
            let gj = generator_lifts[j].entries();
            for r in 0..n {
                for c in 0..n {
                    acc += &gi[r] * &gj[c] * Rat::from(l.gram().at(r, c).clone());
                }
            }
            lift_gram[i][j] = acc;
        }
    }
    DiscriminantGroup {
        invariant_factors,
        generator_lifts,
        lift_gram,
        projection_rows,
    }
}

/// Class of v / div(v) in A_L.
pub fn residue(l: &Lattice, group: &DiscriminantGroup, v: &Class) -> Result<DiscElement, EichlerError> {
    if v.is_zero() {
        return Err(EichlerError::ZeroVector);
    }
    let d = l.divisibility(v).expect("nonzero vector has a divisibility");
    // G * v / div is integral by definition of the divisibility.
    let gv = l.gram().mul_vec(v.coords());
    let scaled: Vec<Int> = gv.iter().map(|e| e / &d).collect();
    let components = group
        .projection_rows
        .iter()
        .map(|row| {
            let mut acc = Int::zero();
            for (a, b) in row.iter().zip(&scaled) {
                acc += a * b;
            }
            acc
        })
        .collect();
    Ok(group.reduce(components))
}

fn require_planes(l: &Lattice, needed: usize) -> Result<(), EichlerError> {
    if l.hyperbolic_summands().len() >= needed {
        Ok(())
    } else {
        Err(EichlerError::NoU2Witness)
    }
}

/// Orbit test for primitive vectors under the stable orientation-preserving
/// isometry group, for lattices with a certified U^2 split: v and w are
/// equivalent iff they share square and discriminant residue.
pub fn eichler_equivalent(
    l: &Lattice,
    group: &DiscriminantGroup,
    v: &Class,
    w: &Class,
) -> Result<bool, EichlerError> {
    require_planes(l, 2)?;
    if v.is_zero() || w.is_zero() {
        return Err(EichlerError::ZeroVector);
    }
    if !v.is_primitive() || !w.is_primitive() {
        return Err(EichlerError::NotPrimitive);
    }
    if l.q(v) != l.q(w) {
        return Ok(false);
    }
    Ok(residue(l, group, v)? == residue(l, group, w)?)
}

/// Orbit test for sublattices: equal Gram matrices in the given basis
/// order and matching residues of paired basis vectors, for L = U^n + L'
/// with n at least rank + 1. Bases are compared in the order given;
/// callers may permute externally.
pub fn eichler_sublattice_equivalent(
    l: &Lattice,
    group: &DiscriminantGroup,
    s: &Sublattice,
    t: &Sublattice,
) -> Result<bool, EichlerError> {
    let r = s.rank();
    if t.rank() != r {
        return Ok(false);
    }
    let planes = l.hyperbolic_summands().len();
    if planes < 2 {
        return Err(EichlerError::NoU2Witness);
    }
    if r > planes - 1 {
        return Err(EichlerError::RankTooLarge);
    }
    if l.restricted_gram(s) != l.restricted_gram(t) {
        return Ok(false);
    }
    for i in 0..r {
        let rs = residue(l, group, &s.basis_class(i))?;
        let rt = residue(l, group, &t.basis_class(i))?;
        if rs != rt {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Congruence gate from the three-torsion discriminant: in a lattice with
/// A_L = Z/3 of OG10 type, any primitive vector of divisibility 3 has
/// square congruent to 12 mod 18 (equivalently -6). Divisibility-1 vectors
/// pass vacuously.
pub fn div3_square_residue_check(l: &Lattice, v: &Class) -> Result<bool, EichlerError> {
    if v.is_zero() {
        return Err(EichlerError::ZeroVector);
    }
    if !v.is_primitive() {
        return Err(EichlerError::NotPrimitive);
    }
    let d = l.divisibility(v).expect("nonzero vector");
    if d != int(3) {
        return Ok(true);
    }
    Ok(l.q(v).mod_floor(&int(18)) == int(12))
}
