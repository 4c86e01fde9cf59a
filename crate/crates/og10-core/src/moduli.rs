//! Algebraic Mukai-lattice machinery for moduli of sheaves on K3 surfaces:
//! Mukai vectors, the Picard lattice of the symplectic resolution with its
//! half-integral overlattice, curve-class solving, dual wall divisors, and
//! the divisorial/small contraction classifier.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{mukai_algebraic, Class, Lattice, LatticeError};
use crate::matrix::{
    hermite_normal_form, int, integer_kernel, inverse_rational, solve_rational, Int, IntMatrix,
    Rat, RatVector,
};
use crate::wall::{PexType, WallError, WallType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuliError {
    /// v must be twice a primitive vector of square 2.
    NotOG10Vector,
    /// The constructive embedding recipe covers Picard rank <= 2 only.
    EmbeddingNotFound,
    Inconsistent,
    NotProportionalToWall,
    NotInVPerp,
    PolarizationNotPositive,
    Wall(WallError),
    Lattice(LatticeError),
}

impl fmt::Display for ModuliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliError::NotOG10Vector => {
                write!(f, "Mukai vector must be 2w with w primitive of square 2")
            }
            ModuliError::EmbeddingNotFound => {
                write!(f, "no OG10 embedding within the constructive recipe")
            }
            ModuliError::Inconsistent => write!(f, "inconsistent pairing system"),
            ModuliError::NotProportionalToWall => {
                write!(f, "primitive class on the ray is not a wall divisor")
            }
            ModuliError::NotInVPerp => write!(f, "class does not lie in v-perp"),
            ModuliError::PolarizationNotPositive => {
                write!(f, "polarization must have positive square")
            }
            ModuliError::Wall(e) => write!(f, "{}", e),
            ModuliError::Lattice(e) => write!(f, "{}", e),
        }
    }
}

impl From<LatticeError> for ModuliError {
    fn from(e: LatticeError) -> Self {
        ModuliError::Lattice(e)
    }
}

impl From<WallError> for ModuliError {
    fn from(e: WallError) -> Self {
        ModuliError::Wall(e)
    }
}

/// Mukai vector (r, c, s) with c a class in Pic(S).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiVector {
    pub r: Int,
    pub c: Class,
    pub s: Int,
}

impl MukaiVector {
    pub fn new(r: Int, c: Class, s: Int) -> Self {
        MukaiVector { r, c, s }
    }

    pub fn from_i64(r: i64, c: &[i64], s: i64) -> Self {
        MukaiVector {
            r: int(r),
            c: Class::from_i64(c),
            s: int(s),
        }
    }

    /// Mukai square c^2 - 2 r s.
    pub fn square(&self, pic: &Lattice) -> Int {
        pic.q(&self.c) - int(2) * &self.r * &self.s
    }

    /// Coordinates in the algebraic Mukai lattice (r, c..., s).
    pub fn mukai_coords(&self) -> Vec<Int> {
        let mut out = Vec::with_capacity(self.c.len() + 2);
        out.push(self.r.clone());
        out.extend(self.c.coords().iter().cloned());
        out.push(self.s.clone());
        out
    }

    pub fn scaled(&self, k: i64) -> MukaiVector {
        MukaiVector {
            r: &self.r * int(k),
            c: self.c.scaled(k),
            s: &self.s * int(k),
        }
    }
}

/// Picard lattice of the symplectic resolution of a singular O'Grady-type
/// moduli space: the algebraic part of v-perp, extended by the exceptional
/// class sigma of square -6 and, when the algebraic lattice carries the
/// divisibility-2 glue class, by the half class (alpha0 - sigma)/2.
///
/// The public presentation is always (v-perp basis ..., sigma); the
/// internal basis may differ and is never exposed directly.
#[derive(Clone, Debug)]
pub struct ModuliPicard {
    lattice: Lattice,
    /// sigma in internal coordinates.
    sigma: Class,
    /// Canonical v-perp basis in internal coordinates.
    vperp_in_m: Vec<Class>,
    /// The same canonical basis in Mukai coordinates.
    vperp_mukai: Vec<Vec<Int>>,
    /// Gram of the canonical v-perp basis.
    vperp_gram: IntMatrix,
    /// Half class x0 = (alpha0 - sigma)/2, internal coordinates.
    half_class: Option<Class>,
    /// Verified images of the internal basis in the OG10 lattice.
    embedding: Option<Vec<Class>>,
    og10: Lattice,
    mukai: Lattice,
    v: Vec<Int>,
}

impl ModuliPicard {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn sigma(&self) -> &Class {
        &self.sigma
    }

    pub fn vperp_rank(&self) -> usize {
        self.vperp_in_m.len()
    }

    /// Canonical v-perp basis, internal coordinates.
    pub fn vperp_basis(&self) -> &[Class] {
        &self.vperp_in_m
    }

    /// Canonical v-perp basis, Mukai coordinates.
    pub fn vperp_mukai(&self) -> &[Vec<Int>] {
        &self.vperp_mukai
    }

    /// Gram of the canonical v-perp basis (the singular moduli lattice).
    pub fn vperp_gram(&self) -> &IntMatrix {
        &self.vperp_gram
    }

    pub fn half_class(&self) -> Option<&Class> {
        self.half_class.as_ref()
    }

    pub fn mukai_lattice(&self) -> &Lattice {
        &self.mukai
    }

    /// Class from coefficients over the presentation (v-perp ..., sigma).
    pub fn class_from_presentation(&self, coeffs: &[Int]) -> Class {
        assert_eq!(coeffs.len(), self.vperp_in_m.len() + 1);
        let mut acc = Class::zero(self.rank());
        for (c, b) in coeffs.iter().zip(self.vperp_in_m.iter()) {
            acc = acc.add(&b.scaled_int(c));
        }
        acc.add(&self.sigma.scaled_int(&coeffs[self.vperp_in_m.len()]))
    }

    /// Rational coefficients of an internal-coordinates class over the
    /// presentation basis (v-perp ..., sigma).
    pub fn presentation_coords(&self, class: &Class) -> RatVector {
        let n = self.rank();
        let cols = self.presentation_columns();
        let m = IntMatrix::from_fn(n, n, |r, c| cols[c].coords()[r].clone());
        solve_rational(&m, &class.to_rat()).expect("presentation basis spans")
    }

    fn presentation_columns(&self) -> Vec<Class> {
        let mut cols = self.vperp_in_m.clone();
        cols.push(self.sigma.clone());
        cols
    }

    /// Member of v-perp given by integer Mukai coordinates, as an internal
    /// class. Errors when the class does not pair to zero with v.
    pub fn class_from_mukai(&self, coords: &[Int]) -> Result<Class, ModuliError> {
        if coords.len() != self.mukai.rank() {
            return Err(ModuliError::Lattice(LatticeError::DimensionMismatch));
        }
        let probe = Class::new(coords.to_vec());
        let vc = Class::new(self.v.clone());
        if !self.mukai.pair(&probe, &vc).is_zero() {
            return Err(ModuliError::NotInVPerp);
        }
        // Solve over the canonical v-perp basis.
        let k = self.vperp_mukai.len();
        let m = IntMatrix::from_fn(self.mukai.rank(), k, |r, c| self.vperp_mukai[c][r].clone());
        let sol = solve_rational(&m, &probe.to_rat()).ok_or(ModuliError::NotInVPerp)?;
        let ints = sol.to_ints().ok_or(ModuliError::NotInVPerp)?;
        let mut acc = Class::zero(self.rank());
        for (c, b) in ints.iter().zip(self.vperp_in_m.iter()) {
            acc = acc.add(&b.scaled_int(c));
        }
        Ok(acc)
    }

    /// The verified OG10 coordinate map for the internal basis.
    pub fn embedding(&self) -> Option<&[Class]> {
        self.embedding.as_deref()
    }

    /// Image of an internal class in OG10 coordinates.
    pub fn to_og10(&self, class: &Class) -> Result<Class, ModuliError> {
        let emb = self.embedding.as_ref().ok_or(ModuliError::EmbeddingNotFound)?;
        let mut acc = Class::zero(24);
        for (c, img) in class.coords().iter().zip(emb.iter()) {
            acc = acc.add(&img.scaled_int(c));
        }
        Ok(acc)
    }

    /// Divisibility in the ambient OG10 lattice, through the embedding.
    pub fn ambient_divisibility(&self, class: &Class) -> Result<Int, ModuliError> {
        let img = self.to_og10(class)?;
        Ok(self.og10.divisibility(&img)?)
    }

    pub fn wall_type(&self, class: &Class) -> Result<Option<WallType>, ModuliError> {
        let img = self.to_og10(class)?;
        Ok(crate::wall::wall_type(&self.og10, &img)?)
    }

    pub fn pex_type(&self, class: &Class) -> Result<Option<PexType>, ModuliError> {
        let img = self.to_og10(class)?;
        Ok(crate::wall::stably_prime_exceptional(&self.og10, &img)?)
    }
}

/// Verified OG10 coordinate map of a moduli Picard lattice (identity op on
/// the stored certificate, re-checking it).
pub fn og10_embedding_certificate(picm: &ModuliPicard) -> Result<&[Class], ModuliError> {
    let emb = picm.embedding().ok_or(ModuliError::EmbeddingNotFound)?;
    let og10 = Lattice::og10();
    for (r, er) in emb.iter().enumerate() {
        for (c, ec) in emb.iter().enumerate() {
            if og10.pair(er, ec) != *picm.lattice().gram().at(r, c) {
                return Err(ModuliError::EmbeddingNotFound);
            }
        }
    }
    Ok(emb)
}

/// Build the Picard lattice of the symplectic resolution for v = 2w with
/// w primitive of square 2, over the given K3 Picard lattice.
pub fn moduli_picard(pic_s: &Lattice, v: &MukaiVector) -> Result<ModuliPicard, ModuliError> {
    let mukai = mukai_algebraic(pic_s);
    // OG10 condition: v = 2w integral with w primitive and w^2 = 2.
    let vc = v.mukai_coords();
    if vc.iter().any(|x| x.is_odd()) {
        return Err(ModuliError::NotOG10Vector);
    }
    let w: Vec<Int> = vc.iter().map(|x| x / int(2)).collect();
    let w_class = Class::new(w);
    if !w_class.is_primitive() || mukai.q(&w_class) != int(2) {
        return Err(ModuliError::NotOG10Vector);
    }

    // Saturated algebraic v-perp with the canonical basis: Hermite-reduced,
    // signs normalized so the leading Picard component is positive.
    let n = mukai.rank();
    let gv = mukai.gram().mul_vec(&vc);
    let pairing_col = IntMatrix::from_fn(n, 1, |r, _| gv[r].clone());
    let kernel = integer_kernel(&pairing_col);
    let k = kernel.rows();
    let mut vperp_mukai: Vec<Vec<Int>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = kernel.row_vec(i);
        let pic_slice = &row[1..n - 1];
        let lead = pic_slice
            .iter()
            .find(|x| !x.is_zero())
            .or_else(|| row.iter().find(|x| !x.is_zero()));
        if let Some(l) = lead {
            if l.is_negative() {
                row = row.iter().map(|x| -x.clone()).collect();
            }
        }
        vperp_mukai.push(row);
    }
    let vperp_gram = IntMatrix::from_fn(k, k, |r, c| {
        let a = Class::new(vperp_mukai[r].clone());
        let b = Class::new(vperp_mukai[c].clone());
        mukai.pair(&a, &b)
    });

    // Glue-class search: a primitive alpha0 with all basis pairings even
    // and q(alpha0) = 6 mod 8 marks the residue along which the half class
    // (alpha0 - sigma)/2 is integral and even.
    let alpha0 = find_glue_class(&vperp_gram);

    let (lattice, sigma, vperp_in_m, half_class) = match &alpha0 {
        None => {
            // M = v-perp + <sigma>, basis (beta..., sigma).
            let rank = k + 1;
            let gram = IntMatrix::from_fn(rank, rank, |r, c| {
                if r < k && c < k {
                    vperp_gram.at(r, c).clone()
                } else if r == k && c == k {
                    int(-6)
                } else {
                    int(0)
                }
            });
            let lattice = Lattice::new(gram)?;
            let sigma = unit_class(rank, k);
            let vperp_in_m = (0..k).map(|i| unit_class(rank, i)).collect();
            (lattice, sigma, vperp_in_m, None)
        }
        Some(alpha) => {
            // Basis (sigma, beta'_2.., x0) with beta' completing alpha0 to
            // a basis of v-perp and x0 = (alpha0 - sigma)/2.
            let completion = complete_to_basis(alpha);
            let rank = k + 1;
            let q_alpha = quad(&vperp_gram, alpha);
            let q_x0 = (&q_alpha - int(6)) / int(4);
            let gram = IntMatrix::from_fn(rank, rank, |r, c| {
                // index 0 = sigma, 1..k-1 = beta'_{2..k}, k = x0
                let val = |i: usize, j: usize| -> Int {
                    match (i, j) {
                        (0, 0) => int(-6),
                        (0, jj) if jj == k => int(3),
                        (0, _) => int(0),
                        (ii, jj) if ii == k && jj == k => q_x0.clone(),
                        (ii, jj) if jj == k => {
                            // (beta'_{ii+1}, x0) = (beta', alpha0)/2
                            pair_rows(&vperp_gram, &completion[ii], alpha) / int(2)
                        }
                        (ii, jj) => pair_rows(&vperp_gram, &completion[ii], &completion[jj]),
                    }
                };
                if r <= c {
                    val(r, c)
                } else {
                    val(c, r)
                }
            });
            let lattice = Lattice::new(gram)?;
            let sigma = unit_class(rank, 0);
            let x0 = unit_class(rank, k);
            // beta_i over the internal basis, via the inverse completion.
            let comp_rows = IntMatrix::from_fn(k, k, |r, c| {
                if r == 0 {
                    alpha[c].clone()
                } else {
                    completion[r][c].clone()
                }
            });
            let inv = inverse_rational(&comp_rows);
            let mut vperp_in_m = Vec::with_capacity(k);
            for i in 0..k {
                // beta_i = sum_j inv[i][j] * new_j, with new_1 = alpha0 =
                // sigma + 2 x0 and new_j (j >= 2) at index j-1.
                let mut coords = vec![Int::zero(); rank];
                for j in 0..k {
                    let f = &inv[i][j];
                    assert!(f.is_integer(), "unimodular completion inverse is integral");
                    let f = f.to_integer();
                    if j == 0 {
                        coords[0] += &f;
                        coords[k] += int(2) * &f;
                    } else {
                        coords[j] += &f;
                    }
                }
                vperp_in_m.push(Class::new(coords));
            }
            (lattice, sigma, vperp_in_m, Some(x0))
        }
    };

    // Constructive OG10 embedding for Picard rank <= 2 (so k <= 3):
    // companion vectors into the hyperbolic planes, sigma onto the
    // divisibility-3 class e1 + 2 e2 of A2(-1), the half class picking up
    // the A2 correction -e2.
    let og10 = Lattice::og10();
    let embedding = build_embedding(&lattice, &sigma, half_class.as_ref());
    if let Some(emb) = &embedding {
        verify_embedding(&lattice, &sigma, emb, &og10)?;
    }

    Ok(ModuliPicard {
        lattice,
        sigma,
        vperp_in_m,
        vperp_mukai,
        vperp_gram,
        half_class,
        embedding,
        og10,
        mukai,
        v: vc,
    })
}

fn unit_class(rank: usize, i: usize) -> Class {
    let mut coords = vec![Int::zero(); rank];
    coords[i] = Int::one();
    Class::new(coords)
}

fn pair_rows(gram: &IntMatrix, a: &[Int], b: &[Int]) -> Int {
    let mut acc = Int::zero();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            acc += ai * bj * gram.at(i, j);
        }
    }
    acc
}

fn quad(gram: &IntMatrix, a: &[Int]) -> Int {
    pair_rows(gram, a, a)
}

/// Exhaustive search for a glue class: a primitive vector with even
/// pairings against the whole basis and square 6 mod 8.
///
/// Both conditions only depend on the class mod 2L — shifting by 2 gamma
/// changes pairings by even amounts, and changes the square by
/// 4(alpha, gamma) + 4 q(gamma), a multiple of 8 once the pairings are
/// even and the lattice is even. Every residue mod 2L has a representative
/// with 0/1 coordinates, and any such nonzero vector has content 1, so
/// scanning the 0/1 box decides existence exactly. The lexicographically
/// smallest representative is returned for determinism.
fn find_glue_class(vperp_gram: &IntMatrix) -> Option<Vec<Int>> {
    let k = vperp_gram.rows();
    for mask in 1u64..(1u64 << k) {
        let cand: Vec<Int> = (0..k)
            .map(|i| if mask & (1 << (k - 1 - i)) != 0 { Int::one() } else { Int::zero() })
            .collect();
        if is_glue_class(vperp_gram, &cand) {
            return Some(cand);
        }
    }
    None
}

fn is_glue_class(gram: &IntMatrix, cand: &[Int]) -> bool {
    for j in 0..gram.rows() {
        let mut p = Int::zero();
        for (i, ci) in cand.iter().enumerate() {
            p += ci * gram.at(i, j);
        }
        if p.is_odd() {
            return false;
        }
    }
    quad(gram, cand).mod_floor(&int(8)) == int(6)
}

/// Complete a primitive vector to a basis of Z^k; returns all k rows with
/// the first equal to the input.
fn complete_to_basis(alpha: &[Int]) -> Vec<Vec<Int>> {
    let k = alpha.len();
    let col = IntMatrix::from_fn(k, 1, |r, _| alpha[r].clone());
    let hnf = hermite_normal_form(&col);
    // t * alpha = e1 (alpha primitive), so alpha is the first column of
    // t^{-1} and the columns of t^{-1} form a basis starting with alpha.
    let tinv = inverse_rational(&hnf.t);
    let mut rows = Vec::with_capacity(k);
    for c in 0..k {
        let row: Vec<Int> = (0..k)
            .map(|r| {
                debug_assert!(tinv[r][c].is_integer());
                tinv[r][c].to_integer()
            })
            .collect();
        rows.push(row);
    }
    debug_assert_eq!(rows[0], alpha.to_vec());
    rows
}

fn build_embedding(lattice: &Lattice, sigma: &Class, half: Option<&Class>) -> Option<Vec<Class>> {
    let rank = lattice.rank();
    let k = rank - 1;
    if k > 3 {
        return None;
    }
    // Internal indices of the companion vectors, in order.
    let (sigma_idx, companions): (usize, Vec<usize>) = match half {
        None => (k, (0..k).collect()),
        Some(_) => (0, (1..rank).collect()),
    };
    debug_assert!(sigma.coords()[sigma_idx].is_one());
    let a2_s0: [i64; 2] = [1, 2];
    let mut images: Vec<Option<Class>> = vec![None; rank];
    // sigma -> e1 + 2 e2 in A2(-1) (ambient coordinates 22, 23).
    let mut sc = [0i64; 24];
    sc[22] = a2_s0[0];
    sc[23] = a2_s0[1];
    images[sigma_idx] = Some(Class::from_i64(&sc));
    // Companion embedding into U_1..U_k; the half class (always the last
    // companion) carries the extra A2 part -e2.
    for (m, &idx) in companions.iter().enumerate() {
        let is_half = half.is_some() && idx == rank - 1;
        let extra_qa = if is_half { int(-2) } else { int(0) };
        let mut coords = vec![Int::zero(); 24];
        coords[2 * m] = Int::one(); // e_{m+1}
        for (j, &jdx) in companions.iter().enumerate() {
            let g = lattice.gram().at(idx, jdx).clone();
            match j.cmp(&m) {
                core::cmp::Ordering::Less => coords[2 * j + 1] = g,
                core::cmp::Ordering::Equal => {
                    coords[2 * m + 1] = (g - &extra_qa) / int(2);
                }
                core::cmp::Ordering::Greater => {}
            }
        }
        if is_half {
            coords[23] = int(-1);
        }
        images[idx] = Some(Class::new(coords));
    }
    Some(images.into_iter().map(|c| c.unwrap()).collect())
}

fn verify_embedding(
    lattice: &Lattice,
    sigma: &Class,
    emb: &[Class],
    og10: &Lattice,
) -> Result<(), ModuliError> {
    for (r, er) in emb.iter().enumerate() {
        for (c, ec) in emb.iter().enumerate() {
            if og10.pair(er, ec) != *lattice.gram().at(r, c) {
                return Err(ModuliError::EmbeddingNotFound);
            }
        }
    }
    // Primitivity of the image.
    let sub = og10
        .sublattice(emb.to_vec())
        .map_err(ModuliError::Lattice)?;
    if !sub.is_saturated() {
        return Err(ModuliError::EmbeddingNotFound);
    }
    // Ambient divisibility of sigma must be 3.
    let mut sigma_img = Class::zero(24);
    for (c, img) in sigma.coords().iter().zip(emb.iter()) {
        sigma_img = sigma_img.add(&img.scaled_int(c));
    }
    if og10.divisibility(&sigma_img)? != int(3) {
        return Err(ModuliError::EmbeddingNotFound);
    }
    Ok(())
}

/// The unique rational class with the prescribed pairings against the
/// presentation basis (v-perp ..., sigma). Output coefficients are over
/// the same presentation.
pub fn curve_class(picm: &ModuliPicard, pairings: &[Int]) -> Result<RatVector, ModuliError> {
    let n = picm.rank();
    if pairings.len() != n {
        return Err(ModuliError::Lattice(LatticeError::DimensionMismatch));
    }
    // (P^T G P) y = pairings, P = presentation columns.
    let cols = picm.presentation_columns();
    let m = IntMatrix::from_fn(n, n, |r, c| picm.lattice().pair(&cols[r], &cols[c]));
    let rhs = RatVector::from_ints(pairings);
    solve_rational(&m, &rhs).ok_or(ModuliError::Inconsistent)
}

/// A dual wall divisor: the primitive integral class on a curve ray,
/// classified through the OG10 embedding.
#[derive(Clone, Debug)]
pub struct DualWallDivisor {
    /// Internal coordinates in the moduli Picard lattice.
    pub class: Class,
    pub wall: WallType,
    /// Whether D / div(D) equals the input ray generator exactly.
    pub matches_dual: bool,
}

/// Primitive integral class on the ray of r (presentation coefficients,
/// pairing sign preserved), required to classify as a wall divisor.
pub fn dual_wall_divisor(picm: &ModuliPicard, r: &RatVector) -> Result<DualWallDivisor, ModuliError> {
    if r.len() != picm.rank() {
        return Err(ModuliError::Lattice(LatticeError::DimensionMismatch));
    }
    if r.is_zero() {
        return Err(ModuliError::Lattice(LatticeError::ZeroVector));
    }
    // Convert to internal coordinates.
    let mut internal = vec![Rat::zero(); picm.rank()];
    let cols = picm.presentation_columns();
    for (coeff, col) in r.entries().iter().zip(cols.iter()) {
        for (i, x) in col.coords().iter().enumerate() {
            internal[i] += coeff * Rat::from(x.clone());
        }
    }
    let internal = RatVector::new(internal);
    let (prim, _) = internal.primitive_ray().expect("nonzero ray");
    let class = Class::new(prim);
    let wall = picm
        .wall_type(&class)?
        .ok_or(ModuliError::NotProportionalToWall)?;
    let div = picm.ambient_divisibility(&class)?;
    // D / div(D) = r?
    let dual: Vec<Rat> = class
        .coords()
        .iter()
        .map(|x| Rat::new(x.clone(), div.clone()))
        .collect();
    let matches_dual = RatVector::new(dual) == internal;
    Ok(DualWallDivisor {
        class,
        wall,
        matches_dual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    Divisorial,
    SmallContraction,
    NoWallFound,
}

impl ContractionKind {
    pub fn name(self) -> &'static str {
        match self {
            ContractionKind::Divisorial => "Divisorial",
            ContractionKind::SmallContraction => "SmallContraction",
            ContractionKind::NoWallFound => "NoWallFound",
        }
    }
}

/// Verdict of the numerical contraction classifier.
#[derive(Clone, Debug)]
pub struct ContractionVerdict {
    pub kind: ContractionKind,
    /// All witnesses found, sorted; the canonical witness is the first.
    pub witnesses: Vec<MukaiVector>,
    pub search_complete: bool,
}

impl ContractionVerdict {
    pub fn witness(&self) -> Option<&MukaiVector> {
        self.witnesses.first()
    }
}

/// Classify the contraction M_v(S, H) -> M_v(S, H0) numerically: search
/// for spherical classes s = (r, c, s') with c a nonzero divisor class
/// orthogonal to H0 and q(s) = -2; (s, v) = 0 gives a divisorial
/// contraction, 0 < (s, v) <= 4 a small one. Divisorial wins when both
/// kinds of witness exist.
///
/// Classes with c = 0 never cut walls through the ample cone (their slope
/// condition is empty) and are excluded; this matches the genericity
/// notion for O'Grady polarizations, which only constrains nonzero
/// divisor classes orthogonal to H.
///
/// The search is certified exhaustive (search_complete = true) when v has
/// no Picard component and positive rank: then r is confined to a short
/// interval per pairing value and c ranges over a negative definite
/// lattice with provable coordinate bounds. Otherwise every coordinate is
/// box-bounded by `bound` and completeness is not claimed.
pub fn mz_contraction_type(
    pic_s: &Lattice,
    v: &MukaiVector,
    h0: &Class,
    bound: u32,
) -> Result<ContractionVerdict, ModuliError> {
    if !pic_s.q(h0).is_positive() {
        return Err(ModuliError::PolarizationNotPositive);
    }
    let mukai = mukai_algebraic(pic_s);
    let vc = Class::new(v.mukai_coords());
    let rho = pic_s.rank();

    // c ranges over the h0-orthogonal part of Pic(S), negative definite by
    // the Hodge index theorem whenever pic_s has hyperbolic signature.
    let h0_sub = pic_s.sublattice(vec![h0.clone()])?;
    let c_lattice = pic_s.orthogonal_complement(&h0_sub);
    let c_rank = c_lattice.rank();
    let c_gram = pic_s.restricted_gram(&c_lattice);
    let c_negdef = c_rank == 0
        || Lattice::new(c_gram.clone())
            .map(|l| l.signature() == (0, c_rank))
            .unwrap_or(false);

    let mut witnesses: Vec<MukaiVector> = Vec::new();
    let mut divisorial: Vec<MukaiVector> = Vec::new();
    let mut small: Vec<MukaiVector> = Vec::new();

    let certified_shape =
        v.c.is_zero() && v.r.is_positive() && v.s.is_negative() && c_negdef;
    let mut search_complete = certified_shape;

    let consider = |r: Int, ccoords: Vec<Int>, s: Int| {
        let c_class = c_lattice.class_from_coeffs(&ccoords);
        if c_class.is_zero() {
            return None;
        }
        let mut coords = Vec::with_capacity(rho + 2);
        coords.push(r.clone());
        coords.extend(c_class.coords().iter().cloned());
        coords.push(s.clone());
        let cand = Class::new(coords);
        if mukai.q(&cand) != int(-2) {
            return None;
        }
        let t = mukai.pair(&cand, &vc);
        if t.is_negative() || t > int(4) {
            return None;
        }
        Some((MukaiVector::new(r, c_class, s), t))
    };

    if certified_shape {
        // v = (rv, 0, sv): (s, v) = -r sv - rv s'. For each target pairing
        // t in 0..=4 the square condition c^2 = 2 r s' - 2 <= -2 confines
        // r to [0, t/|sv|].
        let rv = v.r.clone();
        let sv = v.s.clone();
        for t in 0..=4i64 {
            let t_int = int(t);
            let r_max = int(t) / sv.abs();
            let mut r = Int::zero();
            while r <= r_max {
                // rv * s' = -t - r * sv
                let num = -&t_int - &r * &sv;
                if (&num % &rv).is_zero() {
                    let sprime = num / &rv;
                    let m = int(2) * &r * &sprime - int(2);
                    if m.is_negative() {
                        let (found, covered) =
                            enumerate_fixed_square(&c_gram, &m, bound);
                        search_complete &= covered;
                        for ccoords in found {
                            if let Some((w, tt)) = consider(r.clone(), ccoords, sprime.clone()) {
                                debug_assert_eq!(tt, t_int);
                                if t == 0 {
                                    divisorial.push(w);
                                } else {
                                    small.push(w);
                                }
                            }
                        }
                    }
                }
                r += 1;
            }
        }
    } else {
        search_complete = false;
        // Bounded box over (r, c-coords, s').
        let b = bound as i64;
        let mut c_coords = vec![-b; c_rank];
        loop {
            let ccoords: Vec<Int> = c_coords.iter().map(|&x| int(x)).collect();
            for r in -b..=b {
                for s in -b..=b {
                    if let Some((w, t)) = consider(int(r), ccoords.clone(), int(s)) {
                        if t.is_zero() {
                            divisorial.push(w);
                        } else {
                            small.push(w);
                        }
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == c_rank {
                    c_coords.clear();
                    break;
                }
                c_coords[i] += 1;
                if c_coords[i] <= b {
                    break;
                }
                c_coords[i] = -b;
                i += 1;
            }
            if c_coords.is_empty() {
                break;
            }
        }
    }

    sort_witnesses(&mut divisorial);
    sort_witnesses(&mut small);
    let kind = if !divisorial.is_empty() {
        witnesses = divisorial;
        ContractionKind::Divisorial
    } else if !small.is_empty() {
        witnesses = small;
        ContractionKind::SmallContraction
    } else {
        ContractionKind::NoWallFound
    };
    Ok(ContractionVerdict {
        kind,
        witnesses,
        search_complete,
    })
}

fn sort_witnesses(ws: &mut Vec<MukaiVector>) {
    ws.sort_by_key(|w| w.mukai_coords());
    ws.dedup_by_key(|w| w.mukai_coords());
}

/// All coordinate vectors x with x^T gram x = m over a negative definite
/// gram; the second component reports whether the provable coordinate
/// bounds fit inside `bound` (exhaustive enumeration).
fn enumerate_fixed_square(gram: &IntMatrix, m: &Int, bound: u32) -> (Vec<Vec<Int>>, bool) {
    let k = gram.rows();
    if k == 0 {
        return (Vec::new(), true);
    }
    // Cauchy-Schwarz in the positive definite form P = -gram:
    // x_i^2 <= |m| * (P^{-1})_ii.
    let p = IntMatrix::from_fn(k, k, |r, c| -gram.at(r, c).clone());
    let pinv = inverse_rational(&p);
    let mut covered = true;
    let mut limits = Vec::with_capacity(k);
    for i in 0..k {
        let q = Rat::from(m.abs()) * &pinv[i][i];
        let lim = q.floor().to_integer().sqrt();
        if lim > int(bound as i64) {
            covered = false;
        }
        let lim = lim.min(int(bound as i64));
        limits.push(
            i64::try_from(&lim).expect("coordinate limit fits in i64"),
        );
    }
    let mut out = Vec::new();
    let mut coords: Vec<i64> = limits.iter().map(|&l| -l).collect();
    loop {
        let cand: Vec<Int> = coords.iter().map(|&x| int(x)).collect();
        if pair_rows(gram, &cand, &cand) == *m {
            out.push(cand);
        }
        let mut i = 0;
        loop {
            if i == k {
                return (out, covered);
            }
            coords[i] += 1;
            if coords[i] <= limits[i] {
                break;
            }
            coords[i] = -limits[i];
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    fn deg2_pic() -> Lattice {
        Lattice::new(IntMatrix::from_rows_i64(&[&[2]])).unwrap()
    }

    fn elliptic_pic() -> Lattice {
        Lattice::new(IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]])).unwrap()
    }

    #[test]
    fn og10_vector_validation() {
        let pic = deg2_pic();
        // (2,0,-2) = 2(1,0,-1), w^2 = 2.
        assert!(moduli_picard(&pic, &MukaiVector::from_i64(2, &[0], -2)).is_ok());
        // Odd vector.
        assert_eq!(
            moduli_picard(&pic, &MukaiVector::from_i64(1, &[0], -1)).unwrap_err(),
            ModuliError::NotOG10Vector
        );
        // v = 2w with w^2 = 0.
        assert_eq!(
            moduli_picard(&pic, &MukaiVector::from_i64(2, &[0], 0)).unwrap_err(),
            ModuliError::NotOG10Vector
        );
        // Non-primitive w.
        assert_eq!(
            moduli_picard(&pic, &MukaiVector::from_i64(4, &[0], -4)).unwrap_err(),
            ModuliError::NotOG10Vector
        );
    }

    #[test]
    fn mukai_squares() {
        let pic = deg2_pic();
        let muk = mukai_algebraic(&pic);
        for (v, sq) in [
            (MukaiVector::from_i64(2, &[0], -2), 8),
            (MukaiVector::from_i64(0, &[2], -4), 8),
            (MukaiVector::from_i64(0, &[2], 2), 8),
            (MukaiVector::from_i64(1, &[2], 3), 2),
        ] {
            assert_eq!(v.square(&pic), int(sq));
            assert_eq!(muk.q(&Class::new(v.mukai_coords())), int(sq));
        }
    }

    #[test]
    fn resolution_picard_for_ogrady_space() {
        // v = (2,0,-2): Pic contains B~ and Sigma~ with the Gram of the
        // desingularized O'Grady space, and pi^*(2B) = 2 B~ + Sigma~.
        let pic = deg2_pic();
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(2, &[0], -2)).unwrap();
        assert_eq!(picm.rank(), 3);
        let sigma = picm.sigma().clone();
        let btilde = picm.half_class().expect("glue class exists here").clone();
        let l = picm.lattice();
        assert_eq!(l.q(&btilde), int(-2));
        assert_eq!(l.q(&sigma), int(-6));
        assert_eq!(l.pair(&btilde, &sigma), int(3));
        // alpha0 = (1,0,1) corresponds to the Cartier divisor 2B.
        let two_b = picm
            .class_from_mukai(&[int(1), int(0), int(1)])
            .unwrap();
        assert_eq!(two_b, btilde.scaled(2).add(&sigma));
        assert_eq!(l.q(&two_b), int(-2));

        // Ambient divisibilities through the verified embedding.
        assert_eq!(picm.ambient_divisibility(&sigma).unwrap(), int(3));
        assert_eq!(picm.ambient_divisibility(&btilde).unwrap(), int(1));
        assert_eq!(
            picm.pex_type(&btilde).unwrap(),
            Some(PexType::NegTwoDivOne)
        );
        assert_eq!(
            picm.pex_type(&sigma).unwrap(),
            Some(PexType::NegSixDivThree)
        );
    }

    #[test]
    fn torsion_moduli_picard_fixtures() {
        let pic = deg2_pic();
        // v = (0, 2H, -4): <a, b, sigma> with a = (-1,H,0), b = (0,0,1).
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], -4)).unwrap();
        assert!(picm.half_class().is_none());
        assert_eq!(picm.vperp_mukai()[0], vec![int(-1), int(1), int(0)]);
        assert_eq!(picm.vperp_mukai()[1], vec![int(0), int(0), int(1)]);
        let a = picm.vperp_basis()[0].clone();
        let b = picm.vperp_basis()[1].clone();
        let l = picm.lattice();
        assert_eq!(l.q(&a), int(2));
        assert_eq!(l.pair(&a, &b), int(1));
        assert_eq!(l.q(&b), int(0));
        assert_eq!(l.pair(&a, picm.sigma()), int(0));
        assert_eq!(picm.ambient_divisibility(&b).unwrap(), int(1));
        assert_eq!(picm.ambient_divisibility(&a).unwrap(), int(1));

        // v = (0, 2H, 2): a = (2,H,0) with (a,b) = -2; the lattice contains
        // x = -(a + 3b + sigma)/2 with x^2 = -4.
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], 2)).unwrap();
        assert!(picm.half_class().is_some());
        assert_eq!(picm.vperp_mukai()[0], vec![int(2), int(1), int(0)]);
        let a = picm.vperp_basis()[0].clone();
        let b = picm.vperp_basis()[1].clone();
        let l = picm.lattice();
        assert_eq!(l.q(&a), int(2));
        assert_eq!(l.pair(&a, &b), int(-2));
        // x = -(a + 3b + sigma)/2 must be integral of square -4.
        let sum = a.add(&b.scaled(3)).add(picm.sigma());
        assert!(sum.coords().iter().all(|c| c.is_even()));
        let x = Class::new(sum.coords().iter().map(|c| -(c / int(2))).collect());
        assert_eq!(l.q(&x), int(-4));
        assert_eq!(picm.ambient_divisibility(&x).unwrap(), int(1));
    }

    #[test]
    fn curve_class_fixtures() {
        let pic = deg2_pic();
        // Zero section: pairings (-1, 1, 0) against (a, b, sigma) give
        // l = a - 3b.
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], -4)).unwrap();
        let sol = curve_class(&picm, &[int(-1), int(1), int(0)]).unwrap();
        assert_eq!(sol, RatVector::from_i64(&[1, -3, 0]));

        // Non-reduced support: pairings (1, 0, 4) give b - (2/3) sigma.
        let sol = curve_class(&picm, &[int(1), int(0), int(4)]).unwrap();
        assert_eq!(
            sol,
            RatVector::new(vec![rat(0, 1), rat(1, 1), rat(-2, 3)])
        );

        // P3-bundle: v = (0,2H,2), pairings (2, 1, 1) give
        // -a/2 - 3b/2 - sigma/6.
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], 2)).unwrap();
        let sol = curve_class(&picm, &[int(2), int(1), int(1)]).unwrap();
        assert_eq!(
            sol,
            RatVector::new(vec![rat(-1, 2), rat(-3, 2), rat(-1, 6)])
        );
    }

    #[test]
    fn dual_wall_divisor_fixtures() {
        let pic = deg2_pic();
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], -4)).unwrap();
        // Zero section: D = a - 3b of square -4 and divisibility 1.
        let d = dual_wall_divisor(&picm, &RatVector::from_i64(&[1, -3, 0])).unwrap();
        assert_eq!(d.wall, WallType::NegFourDivOne);
        assert!(d.matches_dual);
        assert_eq!(picm.lattice().q(&d.class), int(-4));

        // Non-reduced: R = b - (2/3) sigma gives D = 3b - 2 sigma.
        let r = RatVector::new(vec![rat(0, 1), rat(1, 1), rat(-2, 3)]);
        let d = dual_wall_divisor(&picm, &r).unwrap();
        assert_eq!(d.wall, WallType::NegTwentyFourDivThree);
        assert!(d.matches_dual);
        assert_eq!(picm.lattice().q(&d.class), int(-24));
        assert_eq!(picm.ambient_divisibility(&d.class).unwrap(), int(3));

        // P3-bundle: R~ gives D = 3x + sigma of square -24.
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], 2)).unwrap();
        let r = RatVector::new(vec![rat(-1, 2), rat(-3, 2), rat(-1, 6)]);
        let d = dual_wall_divisor(&picm, &r).unwrap();
        assert_eq!(d.wall, WallType::NegTwentyFourDivThree);
        assert!(d.matches_dual);
        assert_eq!(picm.lattice().q(&d.class), int(-24));

        // A positive ray is rejected.
        let bad = dual_wall_divisor(&picm, &RatVector::from_i64(&[1, 0, 0]));
        assert!(bad.is_err());
    }

    #[test]
    fn mz_small_contraction_elliptic() {
        // Elliptic K3, v = (2,0,-2), H0 = e + 2f: small contraction with
        // witness (1, e - 2f, -1), confirmed against the brute-force path.
        let pic = elliptic_pic();
        let v = MukaiVector::from_i64(2, &[0, 0], -2);
        let h0 = Class::from_i64(&[1, 2]);
        let verdict = mz_contraction_type(&pic, &v, &h0, 10).unwrap();
        assert_eq!(verdict.kind, ContractionKind::SmallContraction);
        assert!(verdict.search_complete);
        let expected = MukaiVector::from_i64(1, &[1, -2], -1);
        assert!(verdict.witnesses.contains(&expected));
        let w = verdict.witness().unwrap();
        let muk = mukai_algebraic(&pic);
        let wc = Class::new(w.mukai_coords());
        assert_eq!(muk.q(&wc), int(-2));
        assert_eq!(
            muk.pair(&wc, &Class::from_i64(&[0, 1, 2, 0])),
            int(0)
        );
        assert_eq!(muk.pair(&wc, &Class::new(v.mukai_coords())), int(4));
    }

    #[test]
    fn mz_generic_polarization_is_wall_free() {
        let pic = deg2_pic();
        let v = MukaiVector::from_i64(2, &[0], -2);
        let h0 = Class::from_i64(&[1]);
        let verdict = mz_contraction_type(&pic, &v, &h0, 10).unwrap();
        assert_eq!(verdict.kind, ContractionKind::NoWallFound);
        assert!(verdict.search_complete);
        assert!(verdict.witnesses.is_empty());
    }

    #[test]
    fn mz_divisorial_and_scaling() {
        // Pic = U, H0 = e + f: the class e - f is a (-2)-divisor orthogonal
        // to H0, giving a divisorial witness (0, e - f, 0).
        let pic = elliptic_pic();
        let v = MukaiVector::from_i64(2, &[0, 0], -2);
        let h0 = Class::from_i64(&[1, 1]);
        let verdict = mz_contraction_type(&pic, &v, &h0, 10).unwrap();
        assert_eq!(verdict.kind, ContractionKind::Divisorial);
        assert!(verdict.search_complete);
        let w = verdict.witness().unwrap();
        let muk = mukai_algebraic(&pic);
        let wc = Class::new(w.mukai_coords());
        assert_eq!(muk.pair(&wc, &Class::new(v.mukai_coords())), int(0));

        // Doubling v keeps the divisorial verdict: orthogonality scales.
        let v2 = v.scaled(2);
        let verdict2 = mz_contraction_type(&pic, &v2, &h0, 10).unwrap();
        assert_eq!(verdict2.kind, ContractionKind::Divisorial);
    }

    #[test]
    fn mz_monotone_in_bound() {
        let pic = elliptic_pic();
        let v = MukaiVector::from_i64(2, &[0, 0], -2);
        for h0 in [Class::from_i64(&[1, 2]), Class::from_i64(&[1, 1])] {
            let small = mz_contraction_type(&pic, &v, &h0, 5).unwrap();
            let big = mz_contraction_type(&pic, &v, &h0, 12).unwrap();
            match small.kind {
                ContractionKind::NoWallFound => {}
                k => assert_eq!(k, big.kind),
            }
        }
    }

    #[test]
    fn mz_rejects_non_positive_polarization() {
        let pic = elliptic_pic();
        let v = MukaiVector::from_i64(2, &[0, 0], -2);
        assert_eq!(
            mz_contraction_type(&pic, &v, &Class::from_i64(&[1, 0]), 5).unwrap_err(),
            ModuliError::PolarizationNotPositive
        );
    }

    #[test]
    fn embedding_certificate_checks() {
        let pic = deg2_pic();
        for v in [
            MukaiVector::from_i64(2, &[0], -2),
            MukaiVector::from_i64(0, &[2], -4),
            MukaiVector::from_i64(0, &[2], 2),
            MukaiVector::from_i64(0, &[2], -2),
        ] {
            let picm = moduli_picard(&pic, &v).unwrap();
            let emb = og10_embedding_certificate(&picm).unwrap();
            assert_eq!(emb.len(), picm.rank());
            // sigma lands on a square -6, divisibility 3 class.
            assert_eq!(picm.ambient_divisibility(picm.sigma()).unwrap(), int(3));
        }
    }

    #[test]
    fn internal_basis_reproduces_the_mukai_pairing() {
        // The canonical v-perp basis, rewritten in internal coordinates,
        // must carry exactly the Mukai pairing, and pair to zero with the
        // exceptional class — for every fixture shape, including a
        // degree-4 K3 and a Picard-rank-2 surface.
        let deg4 = Lattice::new(IntMatrix::from_rows_i64(&[&[4]])).unwrap();
        let elliptic = Lattice::new(IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let cases: Vec<(Lattice, MukaiVector)> = vec![
            (deg2_pic(), MukaiVector::from_i64(2, &[0], -2)),
            (deg2_pic(), MukaiVector::from_i64(0, &[2], -4)),
            (deg2_pic(), MukaiVector::from_i64(0, &[2], 2)),
            (deg2_pic(), MukaiVector::from_i64(0, &[2], -2)),
            // w = (1, H, 1) on a degree-4 K3 has w^2 = 2.
            (deg4, MukaiVector::from_i64(2, &[2], 2)),
            // w = (1, e+f, 0) on the elliptic surface has w^2 = 2.
            (elliptic, MukaiVector::from_i64(2, &[2, 2], 0)),
        ];
        for (pic, v) in cases {
            let picm = moduli_picard(&pic, &v).unwrap();
            let l = picm.lattice();
            let k = picm.vperp_rank();
            for i in 0..k {
                for j in 0..k {
                    assert_eq!(
                        l.pair(&picm.vperp_basis()[i], &picm.vperp_basis()[j]),
                        *picm.vperp_gram().at(i, j),
                        "pairing mismatch at ({}, {})",
                        i,
                        j
                    );
                }
                assert!(l.pair(&picm.vperp_basis()[i], picm.sigma()).is_zero());
            }
            assert_eq!(l.q(picm.sigma()), int(-6));
            if let Some(emb) = picm.embedding() {
                assert_eq!(emb.len(), picm.rank());
                assert_eq!(picm.ambient_divisibility(picm.sigma()).unwrap(), int(3));
            }
        }
    }

    #[test]
    fn saturation_of_twice_a_half_class() {
        // In the v = (0,2H,2) lattice, a + 3b + sigma = -2x, so saturating
        // its span recovers the half class x.
        let pic = deg2_pic();
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], 2)).unwrap();
        let a = picm.vperp_basis()[0].clone();
        let b = picm.vperp_basis()[1].clone();
        let sum = a.add(&b.scaled(3)).add(picm.sigma());
        let l = picm.lattice();
        let s = l.sublattice(vec![sum.clone()]).unwrap();
        assert!(!s.is_saturated());
        let sat = l.saturate(&s);
        let x = Class::new(sum.coords().iter().map(|c| -(c / int(2))).collect());
        let expect = l.sublattice(vec![x]).unwrap();
        assert!(sat.same_span_and_index_one(&expect));
    }

    #[test]
    fn presentation_round_trip() {
        let pic = deg2_pic();
        let picm = moduli_picard(&pic, &MukaiVector::from_i64(0, &[2], 2)).unwrap();
        let class = picm.class_from_presentation(&[int(2), int(-1), int(3)]);
        let back = picm.presentation_coords(&class);
        assert_eq!(back, RatVector::from_i64(&[2, -1, 3]));
    }
}
