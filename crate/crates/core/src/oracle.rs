//! Brute-force mixed moments from the independence axioms.
//!
//! Nothing here knows about eta transforms. A two-factor product state is
//! evaluated directly from its defining recursion: in the conditionally
//! free product of `(A_1, φ_1, ψ_1)` and `(A_2, φ_2, ψ_2)`, an alternating
//! word of ψ-centered letters factorizes,
//!
//! ```text
//! φ(Y_1 Y_2 ⋯ Y_n) = φ_{i_1}(Y_1) φ_{i_2}(Y_2) ⋯ φ_{i_n}(Y_n),
//! ψ(Y_1 Y_2 ⋯ Y_n) = 0                       (n >= 2, free ψ),
//! ```
//!
//! and a general word is reduced to centered ones by expanding one letter
//! at a time as `X = (X − ψ(X)·1) + ψ(X)·1`. Dropping the scalar part
//! either shortens the word at an end or merges the two neighbors of an
//! interior letter, so the recursion terminates; a memo table keyed by the
//! packed word makes it cheap enough to cross-check every convolution
//! formula at small orders.
//!
//! [`oracle_product_moments`] wraps this engine with the functional
//! substitutions that turn the c-free product into each of the other
//! convolutions (monotone, Boolean, orthogonal, c-monotone and the
//! mean-normalized variants), always on the product word `(x_1 x_2)^k`.

use alloc::vec::Vec;

use hashbrown::HashMap;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transforms::MomentSequence;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Longest packable word; two letters per moment order at the cap below.
const MAX_LETTERS: usize = 24;
/// Largest per-generator exponent total (exponents pack into 5 bits).
const MAX_EXPONENT_TOTAL: u32 = 31;
/// Largest order [`oracle_product_moments`] accepts.
const MAX_ORACLE_ORDER: usize = 12;

/// The data `(φ, ψ)` of one factor: moments of both functionals on a
/// single generator, `m_1..m_N` each.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalPair {
    phi: Vec<Complex64>,
    psi: Vec<Complex64>,
}

impl FunctionalPair {
    /// Equal-length, nonempty, finite moment vectors.
    pub fn new(phi_moments: Vec<Complex64>, psi_moments: Vec<Complex64>) -> Result<Self> {
        if phi_moments.is_empty() || phi_moments.len() != psi_moments.len() {
            return Err(Error::InvalidInput(
                "functional pair needs equal-length nonempty moment vectors",
            ));
        }
        let finite = |v: &[Complex64]| v.iter().all(|c| c.re.is_finite() && c.im.is_finite());
        if !finite(&phi_moments) || !finite(&psi_moments) {
            return Err(Error::InvalidInput("functional pair moments must be finite"));
        }
        Ok(FunctionalPair { phi: phi_moments, psi: psi_moments })
    }

    /// Number of moments supplied for each functional.
    pub fn order(&self) -> usize {
        self.phi.len()
    }

    /// Moments of φ on the generator, `m_1..m_N`.
    pub fn phi_moments(&self) -> &[Complex64] {
        &self.phi
    }

    /// Moments of ψ on the generator, `m_1..m_N`.
    pub fn psi_moments(&self) -> &[Complex64] {
        &self.psi
    }
}

/// One letter `x_g^e` of a word in the two-generator product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: u8,
    pub exponent: u32,
}

/// A word in the product algebra, kept in alternating reduced form:
/// adjacent letters carry distinct generators and every exponent is >= 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// Normalizes a letter sequence: zero-exponent letters are dropped and
    /// adjacent letters of the same generator merged. Generators must be
    /// 1 or 2.
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let mut reduced: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if l.generator != 1 && l.generator != 2 {
                return Err(Error::InvalidInput("word generators must be 1 or 2"));
            }
            if l.exponent == 0 {
                continue;
            }
            match reduced.last_mut() {
                Some(prev) if prev.generator == l.generator => prev.exponent += l.exponent,
                _ => reduced.push(l),
            }
        }
        Ok(Word { letters: reduced })
    }

    /// The reduced letters.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The product-moment word `(x_1 x_2)^k`.
    pub fn alternating(k: usize) -> Self {
        let mut letters = Vec::with_capacity(2 * k);
        for _ in 0..k {
            letters.push(Letter { generator: 1, exponent: 1 });
            letters.push(Letter { generator: 2, exponent: 1 });
        }
        Word { letters }
    }
}

/// Convolution selector for [`oracle_product_moments`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionKind {
    Monotone,
    Boolean,
    Orthogonal,
    CMonotone,
    CFree,
    Monotone0,
    Boolean0,
}

/// Alternating word with exponents packed into fixed slots; generators are
/// implicit: letter `i` carries `start_gen` for even `i` and the other
/// generator for odd `i`.
#[derive(Clone, Copy)]
struct PackedWord {
    exps: [u8; MAX_LETTERS],
    len: u8,
    start_gen: u8,
}

impl PackedWord {
    fn generator(&self, i: usize) -> u8 {
        if i.is_multiple_of(2) {
            self.start_gen
        } else {
            3 - self.start_gen
        }
    }

    /// Memo key: 5 bits per exponent (word length is implicit because
    /// in-range exponents are >= 1), 1 bit for the starting generator and
    /// the centering depth `p` above.
    fn key(&self, p: usize) -> u128 {
        let mut k = 0u128;
        for i in 0..self.len as usize {
            k |= (self.exps[i] as u128) << (5 * i);
        }
        k |= ((self.start_gen - 1) as u128) << 120;
        k |= (p as u128) << 121;
        k
    }

    fn remove_first(&self) -> Self {
        let mut out = PackedWord {
            exps: [0; MAX_LETTERS],
            len: self.len - 1,
            start_gen: 3 - self.start_gen,
        };
        out.exps[..out.len as usize].copy_from_slice(&self.exps[1..self.len as usize]);
        out
    }

    fn remove_last(&self) -> Self {
        let mut out = *self;
        out.len -= 1;
        out.exps[out.len as usize] = 0;
        out
    }

    /// Removes interior letter `q` and merges its neighbors (same
    /// generator, so alternation survives).
    fn merged(&self, q: usize) -> Self {
        let mut out = PackedWord { exps: [0; MAX_LETTERS], len: self.len - 2, start_gen: self.start_gen };
        out.exps[..q].copy_from_slice(&self.exps[..q]);
        out.exps[q - 1] += self.exps[q + 1];
        out.exps[q..self.len as usize - 2]
            .copy_from_slice(&self.exps[q + 2..self.len as usize]);
        out
    }

    /// Removes letters `q-1` and `q`; the letters around the gap sit three
    /// apart in the original word, so alternation survives.
    fn dropped(&self, q: usize) -> Self {
        let mut out = PackedWord { exps: [0; MAX_LETTERS], len: self.len - 2, start_gen: self.start_gen };
        out.exps[..q - 1].copy_from_slice(&self.exps[..q - 1]);
        out.exps[q - 1..self.len as usize - 2]
            .copy_from_slice(&self.exps[q + 1..self.len as usize]);
        out
    }
}

/// Multiply-xor mixer for the `u128` memo keys.
#[derive(Default)]
struct WordHasher {
    state: u64,
}

impl core::hash::Hasher for WordHasher {
    fn finish(&self) -> u64 {
        self.state
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.state = (self.state ^ b as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        }
    }

    fn write_u128(&mut self, n: u128) {
        let mut x = (n as u64) ^ ((n >> 64) as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        self.state = x ^ (x >> 31);
    }
}

type Memo = HashMap<u128, (Complex64, Complex64), core::hash::BuildHasherDefault<WordHasher>>;

/// Evaluation engine for one pair of factor states. The memo table is
/// shared across every word evaluated through the same engine.
struct Engine<'a> {
    factors: [&'a FunctionalPair; 2],
    memo: Memo,
}

impl<'a> Engine<'a> {
    fn new(f1: &'a FunctionalPair, f2: &'a FunctionalPair) -> Self {
        Engine { factors: [f1, f2], memo: Memo::default() }
    }

    fn phi(&self, generator: u8, exponent: u8) -> Complex64 {
        self.factors[generator as usize - 1].phi[exponent as usize - 1]
    }

    fn psi(&self, generator: u8, exponent: u8) -> Complex64 {
        self.factors[generator as usize - 1].psi[exponent as usize - 1]
    }

    /// `(φ, ψ)` of the word whose first `p` letters are ψ-centered.
    fn eval(&mut self, w: &PackedWord, p: usize) -> (Complex64, Complex64) {
        let n = w.len as usize;
        if n == 0 {
            return (ONE, ONE);
        }
        let k = w.key(p);
        if let Some(v) = self.memo.get(&k) {
            return *v;
        }
        let value = if p == n {
            // fully centered alternating word: φ factorizes, ψ vanishes
            let mut prod = ONE;
            for i in 0..n {
                let (g, e) = (w.generator(i), w.exps[i]);
                prod *= self.phi(g, e) - self.psi(g, e);
            }
            (prod, ZERO)
        } else {
            // expand letter q = p as (X − ψ(X)) + ψ(X)
            let q = p;
            let centered = self.eval(w, p + 1);
            let cq = self.psi(w.generator(q), w.exps[q]);
            let scalar = if q == 0 {
                self.eval(&w.remove_first(), 0)
            } else if q == n - 1 {
                self.eval(&w.remove_last(), q)
            } else {
                // the centered neighbor q-1 meets letter q+1 of the same
                // generator: (X_{q-1} − c)X_{q+1} = X_{q-1}X_{q+1} − cX_{q+1}
                let m = self.eval(&w.merged(q), p - 1);
                let d = self.eval(&w.dropped(q), p - 1);
                let cprev = self.psi(w.generator(q - 1), w.exps[q - 1]);
                (m.0 - cprev * d.0, m.1 - cprev * d.1)
            };
            (centered.0 + cq * scalar.0, centered.1 + cq * scalar.1)
        };
        self.memo.insert(k, value);
        value
    }
}

/// Packs a reduced word after checking it fits the engine's limits and the
/// factors supply enough moments for every exponent a merge can produce.
fn pack_checked(w: &Word, f1: &FunctionalPair, f2: &FunctionalPair) -> Result<PackedWord> {
    let letters = w.letters();
    if letters.is_empty() {
        return Ok(PackedWord { exps: [0; MAX_LETTERS], len: 0, start_gen: 1 });
    }
    if letters.len() > MAX_LETTERS {
        return Err(Error::ResourceLimit("word exceeds 24 letters"));
    }
    let mut totals = [0u32; 2];
    for l in letters {
        totals[l.generator as usize - 1] += l.exponent;
    }
    if totals[0] > MAX_EXPONENT_TOTAL || totals[1] > MAX_EXPONENT_TOTAL {
        return Err(Error::ResourceLimit("per-generator exponent total exceeds 31"));
    }
    if totals[0] as usize > f1.order() || totals[1] as usize > f2.order() {
        return Err(Error::InvalidInput("word needs more moments than the factors supply"));
    }
    let mut packed = PackedWord {
        exps: [0; MAX_LETTERS],
        len: letters.len() as u8,
        start_gen: letters[0].generator,
    };
    for (slot, l) in packed.exps.iter_mut().zip(letters) {
        *slot = l.exponent as u8;
    }
    Ok(packed)
}

/// `(φ(w), ψ(w))` in the conditionally free product of two factors,
/// straight from the centering recursion.
pub fn oracle_cfree_mixed_moment(
    f1: &FunctionalPair,
    f2: &FunctionalPair,
    w: &Word,
) -> Result<(Complex64, Complex64)> {
    let packed = pack_checked(w, f1, f2)?;
    Ok(Engine::new(f1, f2).eval(&packed, 0))
}

/// Moments `m_1..m_order` of the product variable `x_1 x_2` under both
/// functionals of one engine run.
fn product_run(f1: &FunctionalPair, f2: &FunctionalPair, order: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut engine = Engine::new(f1, f2);
    let mut phi = Vec::with_capacity(order);
    let mut psi = Vec::with_capacity(order);
    for k in 1..=order {
        let w = Word::alternating(k);
        let packed = pack_checked(&w, f1, f2).expect("orders validated by caller");
        let (a, b) = engine.eval(&packed, 0);
        phi.push(a);
        psi.push(b);
    }
    (phi, psi)
}

/// Moments `(c, c^2, ..., c^order)` of the delta functional `δ_c`.
fn delta_moments(c: Complex64, order: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(order);
    let mut pow = ONE;
    for _ in 0..order {
        pow *= c;
        out.push(pow);
    }
    out
}

/// Ground-truth moments of every convolution, as the c-free product state
/// on `(x_1 x_2)^k` with substituted functionals:
///
/// ```text
/// monotone    (φ_1, δ_1), (φ_2, φ_2)      Boolean    (φ_1, δ_1), (φ_2, δ_1)
/// orthogonal  (φ_1, δ_1), (δ_1, φ_2)      c-free     factors as given
/// c-monotone  left (φ_1, δ_1), (φ_2, ψ_2); right a monotone run on the ψ's
/// monotone0   (φ_1, δ_{m_1(φ_1)}), (φ_2, φ_2)
/// Boolean0    (φ_1, δ_{m_1(φ_1)}), (φ_2, δ_{m_1(φ_2)})
/// ```
///
/// Returns `(φ-run, ψ-run)` moment sequences (for the c-monotone kind the
/// second entry is the φ-run of the ψ engine, i.e. the right component of
/// the pair). Orders above 12 are refused: the oracle is a desk-scale
/// ground truth, not a production path.
pub fn oracle_product_moments(
    kind: ConvolutionKind,
    p1: &FunctionalPair,
    p2: &FunctionalPair,
    order: usize,
) -> Result<(MomentSequence, MomentSequence)> {
    if order == 0 {
        return Err(Error::InvalidInput("order must be >= 1"));
    }
    if order > MAX_ORACLE_ORDER {
        return Err(Error::ResourceLimit("oracle orders above 12 are not supported"));
    }
    if p1.order() < order || p2.order() < order {
        return Err(Error::InvalidInput("functional pairs supply fewer moments than the order"));
    }
    let trim = |v: &[Complex64]| v[..order].to_vec();
    let pair = |phi: Vec<Complex64>, psi: Vec<Complex64>| {
        FunctionalPair::new(phi, psi).expect("validated components")
    };
    let unit = delta_moments(ONE, order);

    let (phi_run, psi_run) = match kind {
        ConvolutionKind::Monotone => {
            let f1 = pair(trim(&p1.phi), unit.clone());
            let f2 = pair(trim(&p2.phi), trim(&p2.phi));
            product_run(&f1, &f2, order)
        }
        ConvolutionKind::Boolean => {
            let f1 = pair(trim(&p1.phi), unit.clone());
            let f2 = pair(trim(&p2.phi), unit.clone());
            product_run(&f1, &f2, order)
        }
        ConvolutionKind::Orthogonal => {
            let f1 = pair(trim(&p1.phi), unit.clone());
            let f2 = pair(unit.clone(), trim(&p2.phi));
            product_run(&f1, &f2, order)
        }
        ConvolutionKind::CMonotone => {
            let f1 = pair(trim(&p1.phi), unit.clone());
            let f2 = pair(trim(&p2.phi), trim(&p2.psi));
            let (left, _) = product_run(&f1, &f2, order);
            let g1 = pair(trim(&p1.psi), unit.clone());
            let g2 = pair(trim(&p2.psi), trim(&p2.psi));
            let (right, _) = product_run(&g1, &g2, order);
            (left, right)
        }
        ConvolutionKind::CFree => {
            if p1.phi[0] == ZERO
                || p1.psi[0] == ZERO
                || p2.phi[0] == ZERO
                || p2.psi[0] == ZERO
            {
                return Err(Error::MeanZero("c-free oracle needs nonzero means"));
            }
            let f1 = pair(trim(&p1.phi), trim(&p1.psi));
            let f2 = pair(trim(&p2.phi), trim(&p2.psi));
            product_run(&f1, &f2, order)
        }
        ConvolutionKind::Monotone0 => {
            if p1.phi[0] == ZERO {
                return Err(Error::MeanZero("mean-normalized monotone oracle needs m_1 != 0"));
            }
            let f1 = pair(trim(&p1.phi), delta_moments(p1.phi[0], order));
            let f2 = pair(trim(&p2.phi), trim(&p2.phi));
            product_run(&f1, &f2, order)
        }
        ConvolutionKind::Boolean0 => {
            if p1.phi[0] == ZERO || p2.phi[0] == ZERO {
                return Err(Error::MeanZero("mean-normalized Boolean oracle needs nonzero means"));
            }
            let f1 = pair(trim(&p1.phi), delta_moments(p1.phi[0], order));
            let f2 = pair(trim(&p2.phi), delta_moments(p2.phi[0], order));
            product_run(&f1, &f2, order)
        }
    };
    Ok((MomentSequence::new(phi_run)?, MomentSequence::new(psi_run)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolutions::{conv_boolean, conv_monotone, conv_orthogonal};
    use crate::transforms::{
        eta_from_moments, moments_from_eta, moments_from_spec, CircleMeasureSpec,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn letters(ls: &[(u8, u32)]) -> Word {
        Word::new(ls.iter().map(|&(g, e)| Letter { generator: g, exponent: e }).collect())
            .unwrap()
    }

    fn atoms(a: &[(f64, f64)], order: usize) -> Vec<Complex64> {
        moments_from_spec(&CircleMeasureSpec::Atoms(a.to_vec()), order)
            .unwrap()
            .values()
            .to_vec()
    }

    fn sample_f1(order: usize) -> FunctionalPair {
        FunctionalPair::new(
            atoms(&[(0.3, 0.6), (2.1, 0.4)], order),
            atoms(&[(5.9, 0.7), (1.2, 0.3)], order),
        )
        .unwrap()
    }

    fn sample_f2(order: usize) -> FunctionalPair {
        FunctionalPair::new(
            atoms(&[(0.9, 0.5), (4.4, 0.5)], order),
            atoms(&[(2.8, 0.2), (0.7, 0.8)], order),
        )
        .unwrap()
    }

    #[test]
    fn words_reduce_to_alternating_form() {
        let w = letters(&[(1, 1), (1, 2), (2, 0), (1, 1), (2, 3)]);
        assert_eq!(w.letters(), &[
            Letter { generator: 1, exponent: 4 },
            Letter { generator: 2, exponent: 3 },
        ]);
        assert!(Word::new(vec![Letter { generator: 3, exponent: 1 }]).is_err());
    }

    #[test]
    fn single_letter_reads_off_the_factor_moments() {
        let (f1, f2) = (sample_f1(4), sample_f2(4));
        for e in 1..=3u32 {
            let (phi, psi) =
                oracle_cfree_mixed_moment(&f1, &f2, &letters(&[(1, e)])).unwrap();
            assert!((phi - f1.phi_moments()[e as usize - 1]).norm() < 1e-15);
            assert!((psi - f1.psi_moments()[e as usize - 1]).norm() < 1e-15);
        }
    }

    #[test]
    fn two_letter_word_factorizes_under_both_states() {
        let (f1, f2) = (sample_f1(3), sample_f2(3));
        let (phi, psi) = oracle_cfree_mixed_moment(&f1, &f2, &letters(&[(1, 1), (2, 1)])).unwrap();
        assert!((phi - f1.phi_moments()[0] * f2.phi_moments()[0]).norm() < 1e-15);
        assert!((psi - f1.psi_moments()[0] * f2.psi_moments()[0]).norm() < 1e-15);
    }

    #[test]
    fn psi_of_x1_x2_x1_is_free(){
        // ψ(x_1 x_2 x_1) = ψ_1(x²) ψ_2(x) under the free ψ-product
        let (f1, f2) = (sample_f1(4), sample_f2(4));
        let (_, psi) =
            oracle_cfree_mixed_moment(&f1, &f2, &letters(&[(1, 1), (2, 1), (1, 1)])).unwrap();
        let expected = f1.psi_moments()[1] * f2.psi_moments()[0];
        assert!((psi - expected).norm() < 1e-14);
    }

    #[test]
    fn empty_word_evaluates_to_one() {
        let (f1, f2) = (sample_f1(2), sample_f2(2));
        let (phi, psi) = oracle_cfree_mixed_moment(&f1, &f2, &letters(&[])).unwrap();
        assert_eq!((phi, psi), (ONE, ONE));
    }

    #[test]
    fn resource_and_input_limits_are_enforced() {
        let (f1, f2) = (sample_f1(4), sample_f2(4));
        let long: Vec<(u8, u32)> = (0..26).map(|i| ((i % 2 + 1) as u8, 1u32)).collect();
        assert!(matches!(
            oracle_cfree_mixed_moment(&f1, &f2, &letters(&long)),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            oracle_cfree_mixed_moment(&f1, &f2, &letters(&[(1, 40)])),
            Err(Error::ResourceLimit(_))
        ));
        // within packing limits but beyond the supplied moments
        assert!(matches!(
            oracle_cfree_mixed_moment(&f1, &f2, &letters(&[(1, 5)])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            oracle_product_moments(ConvolutionKind::Monotone, &f1, &f2, 13),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn monotone_oracle_of_point_masses_multiplies_angles() {
        let (cc, dd) = (c(0.6, 0.8), Complex64::from_polar(1.0, 1.1));
        let f1 = FunctionalPair::new(delta_moments(cc, 5), delta_moments(ONE, 5)).unwrap();
        let f2 = FunctionalPair::new(delta_moments(dd, 5), delta_moments(ONE, 5)).unwrap();
        let (left, _) = oracle_product_moments(ConvolutionKind::Monotone, &f1, &f2, 5).unwrap();
        for k in 1..=5 {
            assert!((left.moment(k) - (cc * dd).powu(k as u32)).norm() < 1e-12);
        }
    }

    #[test]
    fn oracle_matches_eta_formulas_at_small_order() {
        let order = 5;
        let (f1, f2) = (sample_f1(order), sample_f2(order));
        let mu = eta_from_moments(&MomentSequence::new(f1.phi_moments().to_vec()).unwrap());
        let nu = eta_from_moments(&MomentSequence::new(f2.phi_moments().to_vec()).unwrap());
        let cases = [
            (ConvolutionKind::Monotone, conv_monotone(&mu, &nu).unwrap()),
            (ConvolutionKind::Boolean, conv_boolean(&mu, &nu).unwrap()),
            (ConvolutionKind::Orthogonal, conv_orthogonal(&mu, &nu).unwrap()),
        ];
        for (kind, eta) in cases {
            let (left, _) = oracle_product_moments(kind, &f1, &f2, order).unwrap();
            let diff = moments_from_eta(&eta).max_abs_diff(&left);
            assert!(diff < 1e-10, "{kind:?} differs from the eta formula by {diff}");
        }
    }

    #[test]
    fn cmonotone_right_output_is_the_monotone_oracle_of_the_psis() {
        let order = 5;
        let (f1, f2) = (sample_f1(order), sample_f2(order));
        let (_, right) = oracle_product_moments(ConvolutionKind::CMonotone, &f1, &f2, order).unwrap();
        let g1 = FunctionalPair::new(f1.psi_moments().to_vec(), f1.psi_moments().to_vec()).unwrap();
        let g2 = FunctionalPair::new(f2.psi_moments().to_vec(), f2.psi_moments().to_vec()).unwrap();
        let (mono, _) = oracle_product_moments(ConvolutionKind::Monotone, &g1, &g2, order).unwrap();
        assert!(right.max_abs_diff(&mono) < 1e-13);
    }

    #[test]
    fn top_moment_enters_affinely() {
        // the order-N moment of one factor occurs in at most one letter of
        // any contributing monomial, so the output is affine in it
        let order = 5;
        let (f1, f2) = (sample_f1(order), sample_f2(order));
        let perturbed = |h: f64| {
            let mut phi = f1.phi_moments().to_vec();
            phi[order - 1] += c(h, 0.0);
            FunctionalPair::new(phi, f1.psi_moments().to_vec()).unwrap()
        };
        let run = |f: &FunctionalPair| {
            oracle_product_moments(ConvolutionKind::CFree, f, &f2, order)
                .unwrap()
                .0
                .moment(order)
        };
        let base = run(&f1);
        let d1 = (run(&perturbed(0.25)) - base) / 0.25;
        let d2 = (run(&perturbed(0.5)) - base) / 0.5;
        assert!((d1 - d2).norm() < 1e-12);
    }

    #[test]
    fn mean_zero_rejections() {
        let order = 4;
        let mut zphi = sample_f1(order).phi_moments().to_vec();
        zphi[0] = ZERO;
        let zero_mean = FunctionalPair::new(zphi.clone(), zphi).unwrap();
        let good = sample_f2(order);
        for kind in [ConvolutionKind::CFree, ConvolutionKind::Monotone0, ConvolutionKind::Boolean0] {
            assert!(matches!(
                oracle_product_moments(kind, &zero_mean, &good, order),
                Err(Error::MeanZero(_))
            ));
        }
        // Boolean0 and CFree also restrict the second factor
        assert!(matches!(
            oracle_product_moments(ConvolutionKind::Boolean0, &good, &zero_mean, order),
            Err(Error::MeanZero(_))
        ));
    }
}
