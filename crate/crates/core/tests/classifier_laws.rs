use cepalg::classifier::{
    measured_derivative, taylor_derivative_bound, Classifier, Overall,
};
use cepalg::expr::NetExpr;
use cepalg::seminorm::{seminorm_order, CompactBox, Grid};
use cepalg::{Family, Region};
use proptest::prelude::*;

fn unit() -> Vec<Region> {
    vec![CompactBox::new(vec![(0.0, 1.0)]).unwrap()]
}

fn net(text: &str) -> NetExpr {
    NetExpr::parse(text, 1).unwrap()
}

const NEGLIGIBLE: &[&str] = &[
    "0",
    "exp(-1/lambda)",
    "exp(-1/lambda)*sin(x1/lambda)",
    "exp(-1/lambda^2)*cos(x1/lambda)",
    "exp(-1/lambda)*(x1^2 + 1)",
];

const MODERATE: &[&str] = &["1", "sin(x1)", "x1^2 + 3", "cos(x1)/(2 + sin(x1))"];

#[test]
fn negligible_nets_are_moderate() {
    let f = Family::colombeau();
    let c = Classifier::new(&f, 10).with_grid(Grid::new(101).unwrap());
    for text in NEGLIGIBLE {
        let r = c.negligible(&net(text), &unit(), 2).unwrap();
        assert_eq!(r.overall, Overall::Negligible, "{text}");
        assert!(r.is_moderate(), "{text}");
        let m = c.moderate(&net(text), &unit(), 2).unwrap();
        assert_eq!(m.overall, Overall::Moderate, "{text}");
    }
}

#[test]
fn ideal_absorbs_bounded_moderate_nets() {
    let f = Family::colombeau();
    let c = Classifier::new(&f, 10).with_grid(Grid::new(101).unwrap());
    for u in NEGLIGIBLE {
        for v in MODERATE {
            let (u, v) = (net(u), net(v));
            assert!(c.negligible(&u, &unit(), 1).unwrap().is_negligible());
            let m = c.moderate(&v, &unit(), 1).unwrap();
            assert!(m.is_moderate());
            let uv = u.product(&v).unwrap();
            assert!(c.negligible(&uv, &unit(), 1).unwrap().is_negligible(), "{uv}");
        }
    }
}

#[test]
fn equality_is_reflexive_and_symmetric() {
    let f = Family::colombeau();
    let c = Classifier::new(&f, 10).with_grid(Grid::new(101).unwrap());
    let nets = [
        "sin(x1/lambda)",
        "sin(x1/lambda) + exp(-1/lambda)",
        "sin(x1/lambda) + lambda",
        "x1^2",
    ];
    for a in nets {
        assert!(c.equality(&net(a), &net(a), &unit(), 1).unwrap().verdict.holds());
        for b in nets {
            let ab = c.equality(&net(a), &net(b), &unit(), 1).unwrap().verdict;
            let ba = c.equality(&net(b), &net(a), &unit(), 1).unwrap().verdict;
            assert_eq!(ab.tag(), ba.tag(), "{a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn taylor_bound_dominates_the_derivative(
        amp in 1i64..=3,
        freq in 1i64..=8,
        shift in -2i64..=2,
        lambda in 0.05f64..=1.0,
        step in 0.01f64..=0.5,
        slack in 1.0f64..=4.0,
    ) {
        let u = net(&format!("{amp}*exp(-1/lambda)*sin({freq}*x1/lambda + {shift})"));
        let k = unit().remove(0);
        let g = Grid::new(201).unwrap();
        let fat = k.fattened(0.5);
        let beta = slack * seminorm_order(&u, &fat, 2, lambda, g).unwrap().max(f64::MIN_POSITIVE);
        let b = step * beta;
        let bound = taylor_derivative_bound(&u, &k, 1, b, beta, lambda, g).unwrap();
        let measured = measured_derivative(&u, &k, 1, lambda, g).unwrap();
        prop_assert!(measured <= bound, "{} <= {}", measured, bound);
    }
}

#[test]
fn single_precision_classification() {
    let f = cepalg::Family32::colombeau();
    let boxes = vec![cepalg::Region32::new(vec![(0.0, 1.0)]).unwrap()];
    let c = Classifier::new(&f, 10).with_grid(Grid::new(101).unwrap());
    assert!(c.negligible(&net("exp(-1/lambda)*sin(x1/lambda)"), &boxes, 1).unwrap().is_negligible());
    assert_eq!(
        c.negligible(&net("lambda*sin(x1/lambda)"), &boxes, 0).unwrap().overall,
        Overall::Refuted { power: 2 }
    );
}
