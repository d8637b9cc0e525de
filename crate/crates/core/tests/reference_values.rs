use rug::ops::Pow;
use rug::{Complex, Integer};
use stieltjes::mpkernel::agreement_digits;
use stieltjes::oracle::gamma_oracle;
use stieltjes::{gamma, GammaRequest, LogValue, Method};

fn cx(re: f64, im: f64) -> Complex {
    Complex::with_val(64, (re, im))
}

fn ten_to(k: u32) -> Integer {
    Integer::from(10u32).pow(k)
}

fn log_agreement(x: &LogValue, y: &LogValue) -> f64 {
    let prec = x.prec().min(y.prec());
    let d = Complex::with_val(prec, x.ln() - y.ln()).exp() - 1u32;
    -stieltjes::mpkernel::cabs(&d).log10().to_f64()
}

#[test]
fn order_1e5_at_100_digits() {
    let r = gamma(&GammaRequest::new(ten_to(5), cx(1.0, 0.0), 100)).unwrap();
    assert_eq!(r.method_used, Method::Saddle);
    assert_eq!(
        r.value.re.to_string(),
        "1.991927306312541095658227243156858920521165977753311325875975525936171259272227176914320666190965225e83432"
    );
    assert!(r.value.im.is_zero());
}

#[test]
fn complex_order_1e5() {
    let r = gamma(&GammaRequest::new(ten_to(5), cx(2.0, 3.0), 40)).unwrap();
    assert_eq!(
        r.value.to_string(),
        "(1.529331424893178966670924533318139416736e83440 + 7.626605317023539228829846454534202735013e83440i)"
    );
}

#[test]
fn small_orders_route_to_direct() {
    let r = gamma(&GammaRequest::new(Integer::from(0), cx(1.0, 0.0), 30)).unwrap();
    assert_eq!(r.method_used, Method::Direct);
    assert_eq!(r.value.re.to_string(), "5.77215664901532860606512090082e-1");
    let r = gamma(&GammaRequest::new(Integer::from(1), cx(1.0, 0.0), 20)).unwrap();
    assert_eq!(r.value.re.to_string(), "-7.2815845483676724861e-2");
}

#[test]
fn direct_matches_oracle_at_complex_v() {
    let v = cx(0.75, -1.5);
    for n in [0u32, 3, 7] {
        let want = gamma_oracle(n, &v, 40).unwrap();
        let got = gamma(&GammaRequest::new(Integer::from(n), v.clone(), 35)).unwrap();
        assert!(agreement_digits(&got.log_value.to_complex().unwrap(), &want) > 35.0);
    }
}

#[test]
fn saddle_and_direct_overlap_at_600() {
    for v in [cx(1.0, 0.0), cx(2.0, 3.0), cx(0.5, 0.0)] {
        let req = GammaRequest::new(Integer::from(600), v, 60);
        let s = gamma(&req.clone().method(Method::Saddle)).unwrap();
        let d = gamma(&req.method(Method::Direct)).unwrap();
        assert_eq!(s.value, d.value);
        assert!(log_agreement(&s.log_value, &d.log_value) > 60.0);
    }
}

#[test]
fn asymptotic_digits_grow_with_order() {
    let mut last = 0.0;
    for k in [4u32, 8, 12] {
        let req = GammaRequest::new(ten_to(k), cx(1.0, 0.0), 25);
        let q = gamma(&req).unwrap();
        let a = gamma(&req.method(Method::Asymptotic)).unwrap();
        let d = log_agreement(&a.log_value, &q.log_value);
        assert!(d >= (k - 2) as f64, "k={k}: {d}");
        assert!(d > last);
        last = d;
    }
}

#[test]
fn conjugate_symmetry() {
    let n = ten_to(6);
    let a = gamma(&GammaRequest::new(n.clone(), cx(1.5, 2.0), 30)).unwrap();
    let b = gamma(&GammaRequest::new(n, cx(1.5, -2.0), 30)).unwrap();
    assert_eq!(a.value.re, b.value.re);
    assert_eq!(a.value.im, b.value.im.neg());
}

#[test]
fn steepest_contour_agrees_with_unit() {
    let mut req = GammaRequest::new(ten_to(7), cx(2.0, 3.0), 50);
    let unit = gamma(&req).unwrap();
    req.contour_mode = stieltjes::ContourMode::Steepest;
    let steep = gamma(&req).unwrap();
    assert_eq!(unit.value, steep.value);
}

#[test]
fn domain_errors() {
    let e = gamma(&GammaRequest::new(Integer::from(5), cx(0.25, 0.0), 10)).unwrap_err();
    assert!(e.is_domain());
    let e = gamma(&GammaRequest::new(Integer::from(100), cx(50.0, 0.0), 10).method(Method::Saddle)).unwrap_err();
    assert!(matches!(e, stieltjes::Error::Guard(_)));
}
