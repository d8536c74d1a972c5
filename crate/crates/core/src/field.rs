//! Prime fields `F_p` and their quadratic extensions `F_{p^2}`.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} exceeds the supported modulus bound 2^16")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
}

/// Commutative ring with identity, enough structure for polynomial arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Image of an integer under the canonical map `Z -> R`.
    fn from_i64(n: i64) -> Self;
}

/// A finite field whose elements are in bijection with `0..ORDER`.
pub trait FiniteField:
    Ring
    + Copy
    + Eq
    + Hash
    + Ord
    + fmt::Display
    + Send
    + Sync
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    const CHARACTERISTIC: u32;
    const ORDER: u32;

    fn inv(self) -> Option<Self>;

    /// Element with enumeration index `i < ORDER`; index 0 is zero, index 1 is one.
    fn from_index(i: u32) -> Self;
    fn index(self) -> u32;

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn elements() -> Vec<Self> {
        (0..Self::ORDER).map(Self::from_index).collect()
    }

    fn units() -> Vec<Self> {
        (1..Self::ORDER).map(Self::from_index).collect()
    }

    fn div(self, rhs: Self) -> Result<Self, FieldError> {
        rhs.inv()
            .map(|r| self * r)
            .ok_or(FieldError::DivisionByZero)
    }
}

pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

const fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Smallest quadratic non-residue modulo an odd prime.
pub const fn smallest_nonsquare(p: u32) -> u32 {
    let p = p as u64;
    let mut c = 2;
    while c < p {
        if pow_mod(c, (p - 1) / 2, p) == p - 1 {
            return c as u32;
        }
        c += 1;
    }
    0
}

fn check_odd_prime(p: u64) -> Result<(), FieldError> {
    if p > 1 << 16 {
        return Err(FieldError::TooLarge(p));
    }
    if p == 2 || !is_prime(p) {
        return Err(FieldError::NotOddPrime(p));
    }
    Ok(())
}

/// Smallest positive integer of multiplicative order `p - 1` modulo `p`.
pub fn primitive_element(p: u64) -> Result<u32, FieldError> {
    check_odd_prime(p)?;
    let n = p - 1;
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    for g in 2..p {
        if factors.iter().all(|&f| pow_mod(g, n / f, p) != 1) {
            return Ok(g as u32);
        }
    }
    // p = 3: the loop above returns 2; nothing else reaches here
    unreachable!("every prime field has a primitive element")
}

/// The quadratic non-residues of `F_p`, sorted ascending.
pub fn nonsquares(p: u64) -> Result<Vec<u32>, FieldError> {
    check_odd_prime(p)?;
    let mut is_square = vec![false; p as usize];
    for a in 1..p {
        is_square[(a * a % p) as usize] = true;
    }
    Ok((1..p as u32).filter(|&a| !is_square[a as usize]).collect())
}

/// Element of the prime field `F_P`, stored as its least nonnegative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const VALID: () = assert!(P > 2 && P <= 1 << 16 && is_prime(P as u64));

    pub const fn new(v: u32) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        Fp(v % P)
    }

    pub fn from_int(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    /// Whether the element is a nonzero square.
    pub fn is_square(self) -> bool {
        self.0 != 0 && pow_mod(self.0 as u64, (P as u64 - 1) / 2, P as u64) == 1
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u32> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u32> Ring for Fp<P> {
    fn from_i64(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<const P: u32> FiniteField for Fp<P> {
    const CHARACTERISTIC: u32 = P;
    const ORDER: u32 = P;

    fn inv(self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // extended Euclid on (a, P)
        let (mut r0, mut r1) = (P as i64, self.0 as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(Self::from_int(s0))
    }

    fn from_index(i: u32) -> Self {
        Fp::new(i)
    }

    fn index(self) -> u32 {
        self.0
    }
}

/// Element `re + im*t` of `F_{P^2} = F_P[t]/(t^2 - eps)`, where `eps` is the
/// smallest non-square modulo `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp2<const P: u32> {
    pub re: Fp<P>,
    pub im: Fp<P>,
}

impl<const P: u32> Fp2<P> {
    pub const EPS: u32 = smallest_nonsquare(P);

    pub fn new(re: Fp<P>, im: Fp<P>) -> Self {
        Fp2 { re, im }
    }

    pub fn from_base(re: Fp<P>) -> Self {
        Fp2 { re, im: Fp::new(0) }
    }

    /// The generator `t` with `t^2 = eps`.
    pub fn t() -> Self {
        Fp2 {
            re: Fp::new(0),
            im: Fp::new(1),
        }
    }

    pub fn eps() -> Fp<P> {
        Fp::new(Self::EPS)
    }

    pub fn conj(self) -> Self {
        Fp2 {
            re: self.re,
            im: -self.im,
        }
    }

    /// `re^2 - eps*im^2`, the norm down to `F_P`.
    pub fn norm(self) -> Fp<P> {
        self.re * self.re - Self::eps() * self.im * self.im
    }

    pub fn in_base_field(self) -> bool {
        self.im.is_zero()
    }

    /// Some square root, if one exists in `F_{P^2}`.
    pub fn sqrt(self) -> Option<Self> {
        Self::elements().into_iter().find(|r| *r * *r == self)
    }
}

impl<const P: u32> fmt::Debug for Fp2<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const P: u32> fmt::Display for Fp2<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.0, self.im.0) {
            (r, 0) => write!(f, "{r}"),
            (0, 1) => write!(f, "(t)"),
            (0, i) => write!(f, "({i}*t)"),
            (r, 1) => write!(f, "({r}+t)"),
            (r, i) => write!(f, "({r}+{i}*t)"),
        }
    }
}

impl<const P: u32> Add for Fp2<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp2 {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<const P: u32> Sub for Fp2<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp2 {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<const P: u32> Mul for Fp2<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = Self::eps();
        Fp2 {
            re: self.re * rhs.re + eps * self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<const P: u32> Neg for Fp2<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp2 {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<const P: u32> AddAssign for Fp2<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Fp2<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Fp2<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Zero for Fp2<P> {
    fn zero() -> Self {
        Fp2::from_base(Fp::new(0))
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<const P: u32> One for Fp2<P> {
    fn one() -> Self {
        Fp2::from_base(Fp::new(1))
    }
}

impl<const P: u32> Ring for Fp2<P> {
    fn from_i64(n: i64) -> Self {
        Fp2::from_base(Fp::from_int(n))
    }
}

impl<const P: u32> From<Fp<P>> for Fp2<P> {
    fn from(a: Fp<P>) -> Self {
        Fp2::from_base(a)
    }
}

impl<const P: u32> FiniteField for Fp2<P> {
    const CHARACTERISTIC: u32 = P;
    const ORDER: u32 = P * P;

    fn inv(self) -> Option<Self> {
        // (u + vt)^{-1} = (u - vt) / (u^2 - eps v^2)
        let n = self.norm().inv()?;
        let c = self.conj();
        Some(Fp2 {
            re: c.re * n,
            im: c.im * n,
        })
    }

    fn from_index(i: u32) -> Self {
        Fp2 {
            re: Fp::new(i % P),
            im: Fp::new(i / P),
        }
    }

    fn index(self) -> u32 {
        self.re.0 + P * self.im.0
    }
}
