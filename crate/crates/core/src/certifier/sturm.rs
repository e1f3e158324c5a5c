//! Sturm bounds and the cusp orders of the clearing form `eta(4z)^24`.

use crate::arith::{self, Rational};
use crate::etaquot::{Cusp, EtaQuotient};

/// Sturm bound for weight `weight2 / 2` on `Gamma_0(N)`:
/// `floor(k N/12 prod (1 + 1/p))` when the characters agree, otherwise
/// `floor(k N^2/12 prod (1 - 1/p^2))`, over primes `p | N`.
pub fn sturm_bound(weight2: u64, n: u64, same_character: bool) -> u64 {
    assert!(
        weight2.is_multiple_of(2),
        "Sturm bound needs integral weight"
    );
    let k = (weight2 / 2) as i128;
    let n = n as i128;
    let primes = arith::prime_divisors(n as u64);
    let (mut num, mut den) = if same_character {
        (k * n, 12i128)
    } else {
        (k * n * n, 12i128)
    };
    for p in primes {
        let p = p as i128;
        if same_character {
            num *= p + 1;
            den *= p;
        } else {
            num *= p * p - 1;
            den *= p * p;
        }
    }
    (num / den) as u64
}

/// `eta(4z)^24`, a weight-12 form on `Gamma_0(4)` vanishing at every cusp.
pub fn clearing_form() -> EtaQuotient {
    EtaQuotient::new(4, [(4, 24)]).expect("valid quotient")
}

/// Order of `eta(4z)^24` at the cusps with denominator `d` of `Gamma_0(level)`.
pub fn clearing_form_order(level: u64, d: u64) -> Rational {
    clearing_form()
        .with_level(level)
        .expect("level is a multiple of 4")
        .ligozat_order(&Cusp { c: 1, d })
}
