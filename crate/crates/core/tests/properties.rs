use proptest::prelude::*;
use rug::{Complex, Float, Integer};
use stieltjes::lambertw::lambert_w0;
use stieltjes::mpkernel::{cabs, digits_to_bits};
use stieltjes::stieltjes::{gamma_direct, parameter_a};
use stieltjes::BigSci;

proptest! {
    #[test]
    fn bigsci_text_round_trip(neg: bool, lead in 1u8..10, rest in "[0-9]{0,40}", exp in any::<i64>()) {
        let digits = format!("{lead}{rest}");
        let x = BigSci::new(neg, digits.clone(), Integer::from(exp)).unwrap();
        let back: BigSci = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(back.significant_digits(), digits.len());
    }

    #[test]
    fn bigsci_from_log10_matches_f64(x in 1e-250f64..1e250, neg: bool) {
        let prec = 200;
        let l = Float::with_val(prec, x).log10();
        let b = BigSci::from_log10(&l, neg, 12).unwrap();
        let want = format!("{}{:.11e}", if neg { "-" } else { "" }, x);
        prop_assert_eq!(b.to_string(), want);
    }

    #[test]
    fn lambert_residual(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        prop_assume!(re.hypot(im) > 1e-3);
        let z = Complex::with_val(200, (re, im));
        let w = lambert_w0(&z, 50).unwrap().w;
        let r = Complex::with_val(200, &w * Complex::with_val(200, w.exp_ref())) - &z;
        prop_assert!((cabs(&r) / cabs(&z)).to_f64() < 1e-48);
        prop_assert!(w.imag().to_f64().abs() < std::f64::consts::PI);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn real_parameter_gives_real_gamma(n in 0u32..12, v in 0.5f64..6.0) {
        let a = parameter_a(&Complex::with_val(64, v), digits_to_bits(40)).unwrap();
        let r = gamma_direct(&Integer::from(n), &a, 25).unwrap();
        prop_assert!(r.log_value.is_real());
        let res = r.imag_residue.unwrap();
        prop_assert!(res.is_zero() || res.to_f64() < 1e-25);
    }
}
