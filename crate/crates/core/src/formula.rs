//! Closed form for the toric cluster variable z_i^{j,k}:
//!
//! `x_r * A^{a/3} * B^{b/3} * C^{c/3} * D^{(k-1)^2/4} * E^{k^2/4}` (floors),
//! with c(i,j) = i^2+ij+j^2+1, a = c+i+2j, b = c+2i+j.

use std::fmt;
use std::sync::OnceLock;

use crate::laurent::{LaurentPoly, NVARS};
use crate::walk::LatticePoint;

pub fn c_quad(i: i64, j: i64) -> i64 {
    i * i + i * j + j * j + 1
}

pub fn a_quad(i: i64, j: i64) -> i64 {
    c_quad(i, j) + i + 2 * j
}

pub fn b_quad(i: i64, j: i64) -> i64 {
    c_quad(i, j) + 2 * i + j
}

fn floor3(n: i64) -> i64 {
    n.div_euclid(3)
}

fn floor_sq4(k: i64) -> i64 {
    (k * k).div_euclid(4)
}

/// Index r of the leading variable x_r, from 2(i-j)+3k mod 6.
pub fn leading_index(i: i64, j: i64, k: i64) -> usize {
    const TABLE: [usize; 6] = [6, 4, 2, 5, 3, 1];
    TABLE[(2 * (i - j) + 3 * k).rem_euclid(6) as usize]
}

/// Exponents of A..E and the leading index for one lattice point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ExponentProfile {
    pub alpha_a: u32,
    pub alpha_b: u32,
    pub alpha_c: u32,
    pub alpha_d: u32,
    pub alpha_e: u32,
    pub r: usize,
}

impl ExponentProfile {
    /// Exponent of 2 in the value at x = 1 (A, B, C each specialize to 2).
    pub fn power_of_two(&self) -> u32 {
        self.alpha_a + self.alpha_b + self.alpha_c
    }

    /// Exponent of 3 in the value at x = 1 (D, E each specialize to 3).
    pub fn power_of_three(&self) -> u32 {
        self.alpha_d + self.alpha_e
    }

    /// 2^(alpha_A+alpha_B+alpha_C) * 3^(alpha_D+alpha_E).
    pub fn value_at_ones(&self) -> num_bigint::BigInt {
        num_bigint::BigInt::from(2).pow(self.power_of_two())
            * num_bigint::BigInt::from(3).pow(self.power_of_three())
    }

    pub fn as_tuple(&self) -> (u32, u32, u32, u32, u32, usize) {
        (self.alpha_a, self.alpha_b, self.alpha_c, self.alpha_d, self.alpha_e, self.r)
    }
}

impl fmt::Display for ExponentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.r)?;
        for (name, e) in [
            ('A', self.alpha_a),
            ('B', self.alpha_b),
            ('C', self.alpha_c),
            ('D', self.alpha_d),
            ('E', self.alpha_e),
        ] {
            match e {
                0 => {}
                1 => write!(f, " {name}")?,
                _ => write!(f, " {name}^{e}")?,
            }
        }
        Ok(())
    }
}

pub fn exponent_profile(p: LatticePoint) -> ExponentProfile {
    let (i, j, k) = (p.i, p.j, p.k);
    let nonneg = |n: i64| u32::try_from(n).expect("floor exponents are non-negative");
    ExponentProfile {
        alpha_a: nonneg(floor3(a_quad(i, j))),
        alpha_b: nonneg(floor3(b_quad(i, j))),
        alpha_c: nonneg(floor3(c_quad(i, j))),
        alpha_d: nonneg(floor_sq4(k - 1)),
        alpha_e: nonneg(floor_sq4(k)),
        r: leading_index(i, j, k),
    }
}

/// Numerators and denominators of A..E as exponent lists.
const NUMERATORS: [&[[i32; NVARS]]; 5] = [
    &[[0, 0, 1, 0, 1, 0], [0, 0, 0, 1, 0, 1]],
    &[[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 1, 0]],
    &[[1, 0, 1, 0, 0, 0], [0, 1, 0, 1, 0, 0]],
    &[[1, 0, 1, 0, 0, 1], [0, 1, 1, 0, 1, 0], [0, 1, 0, 1, 0, 1]],
    &[[0, 1, 0, 1, 1, 0], [1, 0, 1, 0, 1, 0], [1, 0, 0, 1, 0, 1]],
];
const DENOMINATORS: [[i32; NVARS]; 5] = [
    [1, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 1, 1],
    [1, 0, 0, 1, 1, 0],
    [0, 1, 1, 0, 0, 1],
];

fn numerator(n: usize) -> LaurentPoly {
    LaurentPoly::from_terms(NUMERATORS[n].iter().map(|e| (*e, 1.into())))
}

fn building_blocks() -> &'static [LaurentPoly; 5] {
    static BLOCKS: OnceLock<[LaurentPoly; 5]> = OnceLock::new();
    BLOCKS.get_or_init(|| {
        std::array::from_fn(|n| {
            let inv = DENOMINATORS[n].map(|e| -e);
            numerator(n).mul(&LaurentPoly::monomial(inv, 1.into()))
        })
    })
}

pub fn a_poly() -> &'static LaurentPoly {
    &building_blocks()[0]
}
pub fn b_poly() -> &'static LaurentPoly {
    &building_blocks()[1]
}
pub fn c_poly() -> &'static LaurentPoly {
    &building_blocks()[2]
}
pub fn d_poly() -> &'static LaurentPoly {
    &building_blocks()[3]
}
pub fn e_poly() -> &'static LaurentPoly {
    &building_blocks()[4]
}

fn exponents(prof: &ExponentProfile) -> [u32; 5] {
    [prof.alpha_a, prof.alpha_b, prof.alpha_c, prof.alpha_d, prof.alpha_e]
}

/// z_i^{j,k}, fully expanded.
///
/// The five numerators are raised and multiplied as ordinary polynomials, and
/// the common denominator is applied once at the end.
pub fn cluster_variable(p: LatticePoint) -> LaurentPoly {
    let prof = exponent_profile(p);
    let ex = exponents(&prof);
    let mut shift = [0i32; NVARS];
    shift[prof.r - 1] = 1;
    let mut acc = LaurentPoly::one();
    // small factors first keeps intermediate products narrow
    for n in [3, 4, 0, 1, 2] {
        if ex[n] == 0 {
            continue;
        }
        acc = acc.mul(&numerator(n).pow(ex[n]));
        for v in 0..NVARS {
            shift[v] -= DENOMINATORS[n][v] * ex[n] as i32;
        }
    }
    acc.shift(&shift)
}

/// The closed form as numerator factors over a monomial, in the layout
/// `(x1*x3 + x2*x4)^4 (x2*x5 + x1*x6)^6 ... / (x1^7 ...)`.
pub fn factored_form(p: LatticePoint) -> String {
    let prof = exponent_profile(p);
    let ex = exponents(&prof);
    let mut mono = [0i32; NVARS];
    mono[prof.r - 1] = 1;
    let mut parts = Vec::new();
    for n in [2, 1, 0, 3, 4] {
        if ex[n] == 0 {
            continue;
        }
        let body = numerator(n).to_string();
        parts.push(if ex[n] == 1 {
            format!("({body})")
        } else {
            format!("({body})^{}", ex[n])
        });
        for v in 0..NVARS {
            mono[v] -= DENOMINATORS[n][v] * ex[n] as i32;
        }
    }
    let fmt_mono = |e: &[i32; NVARS], sign: i32| -> String {
        let f: Vec<String> = (0..NVARS)
            .filter(|&v| e[v] * sign > 0)
            .map(|v| match e[v] * sign {
                1 => format!("x{}", v + 1),
                n => format!("x{}^{n}", v + 1),
            })
            .collect();
        f.join("*")
    };
    let num_mono = fmt_mono(&mono, 1);
    let den_mono = fmt_mono(&mono, -1);
    let mut out = String::new();
    if !num_mono.is_empty() {
        out.push_str(&num_mono);
    }
    for part in parts {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&part);
    }
    if out.is_empty() {
        out.push('1');
    }
    if !den_mono.is_empty() {
        out.push_str(&format!(" / ({den_mono})"));
    }
    out
}

/// Arithmetic modulo the Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    b %= MODULUS;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> Option<u64> {
    (a % MODULUS != 0).then(|| powmod(a, MODULUS - 2))
}

/// Evaluates `p` modulo 2^61-1 at integer values; `None` if a variable with a
/// negative exponent vanishes.
pub fn eval_mod(p: &LaurentPoly, values: &[u64; NVARS]) -> Option<u64> {
    let inv: Vec<Option<u64>> = values.iter().map(|&v| invmod(v)).collect();
    let mut total = 0u64;
    for (e, c) in p.terms() {
        let mut t = bigint_mod(c);
        for v in 0..NVARS {
            let x = if e[v] >= 0 { values[v] % MODULUS } else { inv[v]? };
            t = mulmod(t, powmod(x, e[v].unsigned_abs() as u64));
        }
        total = (total + t) % MODULUS;
    }
    Some(total)
}

fn bigint_mod(c: &num_bigint::BigInt) -> u64 {
    use num_traits::ToPrimitive;
    let m = num_bigint::BigInt::from(MODULUS);
    let r = ((c % &m) + &m) % &m;
    r.to_u64().expect("reduced residue fits")
}

/// Evaluates cluster variables modulo 2^61-1 from the closed form, without
/// expanding anything.
pub struct ModEval {
    values: [u64; NVARS],
    blocks: [u64; 5],
}

impl ModEval {
    /// Panics if a value is divisible by the modulus or a building block vanishes.
    pub fn new(values: &[u64; NVARS]) -> Self {
        let blocks = std::array::from_fn(|n| {
            let v = eval_mod(&building_blocks()[n], values).expect("values must be units");
            assert!(v != 0, "screening point is a zero of a building block");
            v
        });
        Self { values: *values, blocks }
    }

    pub fn cluster_variable(&self, p: LatticePoint) -> u64 {
        let prof = exponent_profile(p);
        let ex = exponents(&prof);
        (0..5).fold(self.values[prof.r - 1] % MODULUS, |acc, n| {
            mulmod(acc, powmod(self.blocks[n], ex[n] as u64))
        })
    }
}

/// One failed instance of a floor identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub identity: &'static str,
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub lhs_minus_rhs: i64,
    pub expected: i64,
}

fn chi(b: bool) -> i64 {
    i64::from(b)
}

/// Checks every floor identity used in the proof of the closed form over
/// i, j, k in `lo..=hi` and returns the failures (empty when all hold).
///
/// With g = floor(q/3) for q one of a, b, c:
/// * g(i,j)+g(i-1,j+2)-g(i-1,j+1)-g(i,j+1) = chi(i-j = 1, 2, 0 mod 3) for a, b, c;
/// * g(i-1,j+1)+g(i+1,j)-g(i,j)-g(i,j+1) = chi(i-j = 1 mod 3) for b, and its
///   analogues chi(i-j = 2) for c, chi(i-j = 0) for a;
/// * g(i,j+1)+g(i-1,j)-g(i,j)-g(i-1,j+1) = chi(i-j = 1 mod 3) for c, and its
///   analogues chi(i-j = 2) for a, chi(i-j = 0) for b;
/// * floor(k^2/4)+floor((k-2)^2/4)-2floor((k-1)^2/4) = chi(k even);
/// * floor((k+1)^2/4)+floor((k-1)^2/4)-2floor(k^2/4) = chi(k odd).
pub fn check_floor_identities(lo: i64, hi: i64) -> Vec<Counterexample> {
    type Quad = fn(i64, i64) -> i64;
    let g = |q: Quad, i: i64, j: i64| floor3(q(i, j));
    let planar: [(&'static str, Quad, i64, u8); 9] = [
        ("a-hexagon", a_quad, 1, 0),
        ("b-hexagon", b_quad, 2, 0),
        ("c-hexagon", c_quad, 0, 0),
        ("b-square", b_quad, 1, 1),
        ("c-square", c_quad, 2, 1),
        ("a-square", a_quad, 0, 1),
        ("c-diagonal", c_quad, 1, 2),
        ("a-diagonal", a_quad, 2, 2),
        ("b-diagonal", b_quad, 0, 2),
    ];
    let mut out = Vec::new();
    for i in lo..=hi {
        for j in lo..=hi {
            let res = (i - j).rem_euclid(3);
            for &(name, q, want, form) in &planar {
                let diff = match form {
                    0 => g(q, i, j) + g(q, i - 1, j + 2) - g(q, i - 1, j + 1) - g(q, i, j + 1),
                    1 => g(q, i - 1, j + 1) + g(q, i + 1, j) - g(q, i, j) - g(q, i, j + 1),
                    _ => g(q, i, j + 1) + g(q, i - 1, j) - g(q, i, j) - g(q, i - 1, j + 1),
                };
                let expected = chi(res == want);
                if diff != expected {
                    out.push(Counterexample { identity: name, i, j, k: 0, lhs_minus_rhs: diff, expected });
                }
            }
        }
    }
    for k in lo..=hi {
        let d = floor_sq4(k) + floor_sq4(k - 2) - 2 * floor_sq4(k - 1);
        if d != chi(k % 2 == 0) {
            out.push(Counterexample { identity: "k-even", i: 0, j: 0, k, lhs_minus_rhs: d, expected: chi(k % 2 == 0) });
        }
        let e = floor_sq4(k + 1) + floor_sq4(k - 1) - 2 * floor_sq4(k);
        if e != chi(k % 2 != 0) {
            out.push(Counterexample { identity: "k-odd", i: 0, j: 0, k, lhs_minus_rhs: e, expected: chi(k % 2 != 0) });
        }
    }
    out
}
