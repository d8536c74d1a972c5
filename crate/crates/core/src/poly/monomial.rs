use std::cmp::Ordering;
use std::fmt;

/// Packed exponent vector for up to 15 variables.
///
/// Byte `i` (for `i < 15`) holds the exponent of variable `i`, byte 15 holds
/// the total degree. Exponents must stay below 128 so that lane-wise
/// comparisons never borrow across bytes.
///
/// The derived ordering is grevlex with variable 0 the greatest: total degree
/// first, then the monomial with the smaller exponent in the last differing
/// variable wins. Any other precedence chain is obtained by placing variables
/// in that order when building the ring.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u128);

const EXP_MASK: u128 = (1u128 << 120) - 1;
const HIGH: u128 = 0x0080_8080_8080_8080_8080_8080_8080_8080;
const LOW7: u128 = 0x007f_7f7f_7f7f_7f7f_7f7f_7f7f_7f7f_7f7f;

impl Monomial {
    pub const MAX_VARS: usize = 15;
    pub const MAX_EXP: u32 = 127;
    pub const ONE: Monomial = Monomial(0);

    pub fn var(i: usize) -> Self {
        assert!(i < Self::MAX_VARS, "variable index {i} out of range");
        Monomial((1u128 << (8 * i)) | (1u128 << 120))
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= Self::MAX_VARS, "too many variables");
        let mut packed = 0u128;
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= Self::MAX_EXP, "exponent {e} too large");
            packed |= (e as u128) << (8 * i);
            deg += e;
        }
        assert!(deg <= 255, "total degree {deg} too large");
        Monomial(packed | ((deg as u128) << 120))
    }

    #[inline]
    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> 120) as u32
    }

    pub fn exps(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    /// Index one past the last variable with a nonzero exponent.
    pub fn support_len(self) -> usize {
        let e = self.0 & EXP_MASK;
        if e == 0 {
            0
        } else {
            (127 - e.leading_zeros() as usize) / 8 + 1
        }
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn mul(self, o: Monomial) -> Monomial {
        let r = self.0.wrapping_add(o.0);
        assert!(
            r & HIGH == 0 && self.degree() + o.degree() <= 255,
            "monomial exponent overflow"
        );
        Monomial(r)
    }

    /// Whether `self` divides `o`.
    #[inline]
    pub fn divides(self, o: Monomial) -> bool {
        (((o.0 | HIGH) - (self.0 & EXP_MASK)) & HIGH) == HIGH
    }

    /// `self / o`; caller guarantees divisibility.
    #[inline]
    pub fn div_exact(self, o: Monomial) -> Monomial {
        debug_assert!(o.divides(self));
        Monomial(self.0 - o.0)
    }

    pub fn checked_div(self, o: Monomial) -> Option<Monomial> {
        o.divides(self).then(|| Monomial(self.0 - o.0))
    }

    #[inline]
    pub fn coprime(self, o: Monomial) -> bool {
        let nz = |x: u128| ((x & EXP_MASK) + LOW7) & HIGH;
        nz(self.0) & nz(o.0) == 0
    }

    pub fn lcm(self, o: Monomial) -> Monomial {
        let a = self.0 & EXP_MASK;
        let b = o.0 & EXP_MASK;
        let ge = ((a | HIGH) - b) & HIGH;
        let mask = (ge >> 7) * 0xff;
        Self::with_degree((a & mask) | (b & !mask & EXP_MASK))
    }

    fn with_degree(exps: u128) -> Monomial {
        let mut deg = 0u128;
        let mut x = exps;
        while x != 0 {
            deg += x & 0xff;
            x >>= 8;
        }
        Monomial(exps | (deg << 120))
    }

    /// Moves every exponent `k` positions up (variable `i` becomes `i + k`).
    pub fn shift_up(self, k: usize) -> Monomial {
        let e = self.0 & EXP_MASK;
        assert!(
            self.support_len() + k <= Self::MAX_VARS,
            "shift overflows variable slots"
        );
        Monomial((e << (8 * k)) | (self.0 & !EXP_MASK))
    }

    /// Splits into (variables `< k`, variables `>= k` shifted down by `k`).
    pub fn split_at(self, k: usize) -> (Monomial, Monomial) {
        let e = self.0 & EXP_MASK;
        let low_mask = if k == 0 { 0 } else { (1u128 << (8 * k)) - 1 };
        (
            Self::with_degree(e & low_mask),
            Self::with_degree(e >> (8 * k)),
        )
    }

    /// Exponent vector with variable `i` removed and later variables shifted down.
    pub fn remove_var(self, i: usize) -> Monomial {
        let e = self.0 & EXP_MASK;
        let low_mask = if i == 0 { 0 } else { (1u128 << (8 * i)) - 1 };
        let high = (e >> (8 * (i + 1))) << (8 * i);
        Self::with_degree((e & low_mask) | high)
    }

    /// Exponent vector with variable `i` set to zero.
    pub fn without_var(self, i: usize) -> Monomial {
        let e = self.exp(i) as u128;
        Monomial(self.0 - (e << (8 * i)) - (e << 120))
    }

    /// Relabels variables: variable `i` moves to position `perm[i]`.
    pub fn permute(self, perm: &[usize]) -> Monomial {
        let mut out = 0u128;
        for (i, &j) in perm.iter().enumerate() {
            out |= ((self.0 >> (8 * i)) & 0xff) << (8 * j);
        }
        Monomial(out | (self.0 & !EXP_MASK))
    }

    #[inline]
    fn key(self) -> u128 {
        self.0 ^ EXP_MASK
    }

    /// The exponent bytes alone; sorting by this value makes variable 0 the
    /// least significant position.
    pub fn exp_bits(self) -> u128 {
        self.0 & EXP_MASK
    }

    /// Raw packed form, usable as a hash key.
    pub fn packed(self) -> u128 {
        self.0
    }
}

impl Ord for Monomial {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps(self.support_len().max(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grevlex_oracle(a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        if da != db {
            return da.cmp(&db);
        }
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    }

    #[test]
    fn packed_order_matches_definition() {
        let vecs: Vec<Vec<u32>> = (0..256u32)
            .map(|k| vec![k % 4, (k / 4) % 4, (k / 16) % 4, k / 64])
            .collect();
        for a in &vecs {
            for b in &vecs {
                let ma = Monomial::from_exps(a);
                let mb = Monomial::from_exps(b);
                assert_eq!(ma.cmp(&mb), grevlex_oracle(a, b), "{a:?} {b:?}");
                let div = a.iter().zip(b).all(|(x, y)| x <= y);
                assert_eq!(ma.divides(mb), div);
                let l: Vec<u32> = a.iter().zip(b).map(|(x, y)| *x.max(y)).collect();
                assert_eq!(ma.lcm(mb), Monomial::from_exps(&l));
                let cop = a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0);
                assert_eq!(ma.coprime(mb), cop);
            }
        }
    }

    #[test]
    fn three_variable_grevlex() {
        // x > y > z: x^2 > xy > y^2 > xz > yz > z^2
        let m = |e: [u32; 3]| Monomial::from_exps(&e);
        let chain = [
            m([2, 0, 0]),
            m([1, 1, 0]),
            m([0, 2, 0]),
            m([1, 0, 1]),
            m([0, 1, 1]),
            m([0, 0, 2]),
        ];
        for w in chain.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn split_shift_remove() {
        let m = Monomial::from_exps(&[1, 2, 3, 4, 5]);
        let (lo, hi) = m.split_at(2);
        assert_eq!(lo, Monomial::from_exps(&[1, 2]));
        assert_eq!(hi, Monomial::from_exps(&[3, 4, 5]));
        assert_eq!(lo.mul(hi.shift_up(2)), m);
        assert_eq!(m.remove_var(1), Monomial::from_exps(&[1, 3, 4, 5]));
        assert_eq!(m.without_var(1), Monomial::from_exps(&[1, 0, 3, 4, 5]));
        assert_eq!(
            m.permute(&[1, 0, 2, 3, 4]),
            Monomial::from_exps(&[2, 1, 3, 4, 5])
        );
        assert_eq!(m.support_len(), 5);
        assert_eq!(m.degree(), 15);
    }

    #[test]
    #[should_panic]
    fn exponent_overflow_panics() {
        let m = Monomial::from_exps(&[100]);
        let _ = m.mul(m);
    }
}
