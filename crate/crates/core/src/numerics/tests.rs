use super::*;
use crate::exact::sparse_table;
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn ctx(digits: u32) -> PrecisionContext {
    PrecisionContext::with_digits(digits).unwrap()
}

/// Machin: pi = 16 atan(1/5) - 4 atan(1/239), in fixed point with `scale` = 10^d.
fn machin_pi_scaled(d: u32) -> BigInt {
    fn atan_inv(x: u64, scale: &BigInt) -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = scale / &x;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
        }
        sum
    }
    let scale = num_traits::pow(BigInt::from(10), d as usize);
    BigInt::from(16) * atan_inv(5, &scale) - BigInt::from(4) * atan_inv(239, &scale)
}

#[test]
fn pi_matches_machin_oracle() {
    let c = ctx(120);
    let pi = pi(&c).unwrap();
    let a = Arith::new(200, 20).unwrap();
    let scaled = machin_pi_scaled(140);
    let oracle = a.div(
        &a.big_int(&scaled),
        &a.powi(&a.int(10), 140),
    );
    let diff = a.abs(&a.sub(pi.value(), &oracle));
    assert!(diff < a.pow10_neg(119), "pi differs from Machin oracle");
    assert!(pi.to_string_sig(21).starts_with("3.14159265358979323846"));
}

#[test]
fn trivial_values() {
    let c = ctx(60);
    let a = Arith::for_context(&c).unwrap();
    assert!(ln(&a.int(1), &c).unwrap().value().is_zero());
    assert!(sinh(&a.int(0), &c).unwrap().value().is_zero());
    let s = sqrt(&a.int(16), &c).unwrap();
    assert_eq!(s.to_string_sig(5), "4.0000e+0");
    let e = exp(&a.int(0), &c).unwrap();
    assert_eq!(e.to_string_sig(3), "1.00e+0");
    let ch = cosh(&a.int(0), &c).unwrap();
    assert_eq!(ch.to_string_sig(3), "1.00e+0");
}

#[test]
fn domain_errors_are_reported() {
    let a = Arith::new(60, 20).unwrap();
    assert_eq!(a.ln(&a.int(0)), Err(Error::Domain { function: "ln" }));
    assert_eq!(a.ln(&a.int(-3)), Err(Error::Domain { function: "ln" }));
    assert_eq!(a.sqrt(&a.int(-1)), Err(Error::Domain { function: "sqrt" }));
    assert_eq!(
        a.ln_big(&BigUint::zero()),
        Err(Error::Domain { function: "ln_big" })
    );
    // 1/0 is caught when the result is audited
    let c = ctx(60);
    assert!(audit(&c, "1/0", |a| Ok(a.div(&a.int(1), &a.int(0)))).is_err());
}

#[test]
fn context_validation() {
    assert!(PrecisionContext::new(49, 20).is_err());
    assert!(PrecisionContext::new(50, 9).is_err());
    let c = PrecisionContext::default();
    assert_eq!((c.digits(), c.guard()), (120, 20));
    assert_eq!(c.escalated().digits(), 240);
    assert_eq!(c.reference().digits(), 140);
    assert_eq!(c.verdict_exponent(), 60);
}

#[test]
fn ln_big_scaling_identities() {
    let c = ctx(120);
    assert!(ln_big(&BigUint::one(), &c).unwrap().value().is_zero());

    let a = Arith::new(160, 20).unwrap();
    let ln8 = ln_big(&BigUint::from(8u32), &c).unwrap();
    let three_ln2 = a.mul(&a.int(3), &a.ln2());
    assert!(a.abs(&a.sub(ln8.value(), &three_ln2)) < a.pow10_neg(118));

    let p = num_traits::pow(BigUint::from(10u32), 100);
    let got = ln_big(&p, &c).unwrap();
    let want = a.mul(&a.int(100), &a.ln(&a.int(10)).unwrap());
    let rel = a.div(&a.abs(&a.sub(got.value(), &want)), &want);
    assert!(rel < a.pow10_neg(119));
}

#[test]
fn exp_inverts_ln() {
    let c = ctx(120);
    let pbar100 = sparse_table(100).values()[100].clone();
    let a = Arith::new(120, 20).unwrap();
    for x in [a.int(2), a.int(10), a.big_uint(&pbar100)] {
        let back = audit(&c, "exp(ln x)", |a| a.exp(&a.ln(&x)?)).unwrap();
        let rel = a.div(&a.abs(&a.sub(back.value(), &x)), &x);
        assert!(rel < a.pow10_neg(115));
    }
}

#[test]
fn audit_accepts_constants() {
    let c = ctx(50);
    let v = audit(&c, "1.5", |a| Ok(a.ratio(3, 2))).unwrap();
    assert_eq!(v.to_string_sig(2), "1.5e+0");
}

#[test]
fn audit_catches_cancellation() {
    let c = ctx(50);
    let r = audit(&c, "ln(1+x)-x", |a| {
        let x = a.pow10_neg(80);
        let one_plus = a.add(&a.int(1), &x);
        Ok(a.sub(&a.ln(&one_plus)?, &x))
    });
    assert!(matches!(r, Err(Error::Unstable { .. })), "{r:?}");
}

#[test]
fn doubling_digits_is_stable() {
    let s120 = audit(&ctx(120), "sinh(pi*sqrt(7))", |a| {
        a.sinh(&a.mul(&a.pi(), &a.sqrt(&a.int(7))?))
    })
    .unwrap();
    let s240 = audit(&ctx(240), "sinh(pi*sqrt(7))", |a| {
        a.sinh(&a.mul(&a.pi(), &a.sqrt(&a.int(7))?))
    })
    .unwrap();
    assert!(s120.agrees_with(&s240, 115));
}

#[test]
fn quarter_powers() {
    let a = Arith::new(80, 20).unwrap();
    let x = a.int(16);
    assert_eq!(format_significant(&a.pow_quarters(&x, 10).unwrap(), 6), "1.02400e+3"); // 16^2.5
    assert_eq!(format_significant(&a.pow_quarters(&x, 11).unwrap(), 6), "2.04800e+3"); // 16^2.75
    assert_eq!(format_significant(&a.pow_quarters(&x, 1).unwrap(), 3), "2.00e+0");
}

#[test]
fn integer_conversion() {
    let a = Arith::new(120, 20).unwrap();
    let big = num_traits::pow(BigUint::from(3u32), 150);
    let x = a.big_uint(&big);
    assert_eq!(to_big_int(&x), Some(BigInt::from(big)));
    assert_eq!(to_big_int(&a.ratio(-7, 2)), Some(BigInt::from(-3)));
    assert_eq!(to_big_int(&a.int(0)), Some(BigInt::from(0)));
}
