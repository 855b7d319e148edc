use annulus_bvp::eigen::{first_eigen_fd, first_eigen_shoot, ShootConfig};
use annulus_bvp::expr::{BinOp, Bindings, Expr, Func, Var, VarSet};
use annulus_bvp::kernel::{green, green_diag};
use annulus_bvp::ratio::{max_ratio, min_ratio, RatioGrid};
use annulus_bvp::solver::{apply_t, KernelOperator};
use annulus_bvp::{GridFunction, ReducedBvp};
use proptest::prelude::*;

fn grid(i: usize) -> f64 {
    i as f64 / 100.0
}

#[test]
fn green_bounds_on_full_grid() {
    for i in 0..=100 {
        for j in 0..=100 {
            let (t, s) = (grid(i), grid(j));
            let g = green(t, s).unwrap();
            let d = green_diag(s).unwrap();
            assert_eq!(g, green(s, t).unwrap(), "symmetry at ({t}, {s})");
            assert!(g >= 0.0);
            assert!(g <= d + 1e-16, "G({t}, {s}) = {g} > G(s, s) = {d}");
            if (25..=75).contains(&i) {
                assert!(g >= 0.25 * d - 1e-16, "G({t}, {s}) = {g} < G(s, s)/4");
            }
        }
    }
}

// Expressions seen in problem files and worked examples.
const CORPUS: &[&str] = &[
    "1",
    "u",
    "u^2/(1+u)",
    "sqrt(u)+u/2",
    "u/(1+u)",
    "u^3+u/2",
    "u^3",
    "u^-1",
    "4/(2-t)^4",
    "1+t",
    "exp(-t)*u^2",
    "u*(1+sin(t))",
    "abs(u-1)+log(2+t)",
    "-(u^2)+2*u^3",
    "t*(1-t)*cos(u)",
    "2^-3^2",
    "(-u)^2",
    "1.5e-3*u^2.5",
];

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let e = Expr::parse(src, VarSet::TU).unwrap();
        let again = Expr::parse(&e.to_string(), VarSet::TU).unwrap();
        assert_eq!(e, again, "{src} -> {e}");
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        prop::sample::select(vec![0.0, 0.5, 1.0, 2.0, 3.0, 1e-3, 10.0, 0.1]).prop_map(Expr::Num),
        Just(Expr::Var(Var::T)),
        Just(Expr::Var(Var::U)),
    ];
    leaf.prop_recursive(8, 64, 2, |inner| {
        let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow]);
        let func = prop::sample::select(Func::ALL.to_vec());
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (func, inner.clone()).prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
            (op, inner.clone(), inner).prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
        ]
    })
}

/// Postfix program for the reference evaluator.
enum Op {
    Push(f64),
    Load(Var),
    Neg,
    Bin(BinOp),
    Call(Func),
}

fn compile(e: &Expr, out: &mut Vec<Op>) {
    match e {
        Expr::Num(v) => out.push(Op::Push(*v)),
        Expr::Var(v) => out.push(Op::Load(*v)),
        Expr::Neg(a) => {
            compile(a, out);
            out.push(Op::Neg);
        }
        Expr::Call(f, a) => {
            compile(a, out);
            out.push(Op::Call(*f));
        }
        Expr::Bin(op, a, b) => {
            compile(a, out);
            compile(b, out);
            out.push(Op::Bin(*op));
        }
    }
}

/// Binary powering as documented: ascending squares multiplied into the
/// accumulator.
fn reference_pow(x: f64, y: f64) -> Option<f64> {
    if y.fract() == 0.0 && y.abs() <= 1_048_576.0 {
        let n = y.abs() as u64;
        let bits = 64 - n.leading_zeros();
        let mut squares = Vec::new();
        let mut sq = x;
        for k in 0..bits {
            squares.push(sq);
            if k + 1 < bits {
                sq *= sq;
            }
        }
        let p = (0..bits).filter(|k| n >> k & 1 == 1).fold(1.0, |acc, k| acc * squares[k as usize]);
        if y < 0.0 {
            return if x == 0.0 { None } else { Some(1.0 / p) };
        }
        return Some(p);
    }
    if x < 0.0 || (x == 0.0 && !(y > 0.0)) {
        return None;
    }
    Some(if x == 0.0 { 0.0 } else { x.powf(y) })
}

fn run(program: &[Op], t: f64, u: f64) -> Option<f64> {
    let mut stack: Vec<f64> = Vec::new();
    for op in program {
        let v = match op {
            Op::Push(v) => *v,
            Op::Load(Var::T) => t,
            Op::Load(Var::U) => u,
            Op::Load(Var::R) => return None,
            Op::Neg => -stack.pop()?,
            Op::Call(f) => {
                let x = stack.pop()?;
                match f {
                    Func::Sqrt if x < 0.0 => return None,
                    Func::Log if x <= 0.0 => return None,
                    Func::Sqrt => x.sqrt(),
                    Func::Log => x.ln(),
                    Func::Exp => x.exp(),
                    Func::Abs => x.abs(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                }
            }
            Op::Bin(op) => {
                let y = stack.pop()?;
                let x = stack.pop()?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div if y == 0.0 => return None,
                    BinOp::Div => x / y,
                    BinOp::Pow => reference_pow(x, y)?,
                }
            }
        };
        stack.push(v);
    }
    stack.pop()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn display_then_parse_is_identity(e in arb_expr()) {
        let text = e.to_string();
        let back = Expr::parse(&text, VarSet::TU).unwrap();
        prop_assert_eq!(&back, &e, "{}", text);
    }

    #[test]
    fn eval_matches_reference_bit_for_bit(e in arb_expr(), t in 0.0..1.0f64, u in 0.0..5.0f64) {
        let mut program = Vec::new();
        compile(&e, &mut program);
        let reference = run(&program, t, u);
        match (e.eval(&Bindings::tu(t, u)), reference) {
            (Ok(a), Some(b)) => prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()), "{} : {} vs {}", e, a, b),
            (Err(_), None) => {}
            (a, b) => prop_assert!(false, "{}: {:?} vs {:?}", e, a, b),
        }
    }
}

#[test]
fn precedence_and_associativity() {
    let v = |s: &str| Expr::parse(s, VarSet::TU).unwrap().eval_tu(0.0, 0.0).unwrap();
    assert_eq!(v("2^3^2"), 512.0);
    assert_eq!(v("-2^2"), -4.0);
    assert_eq!(v("(-2)^2"), 4.0);
    assert_eq!(v("8/4/2"), 1.0);
    assert_eq!(v("8-4-2"), 2.0);
    assert_eq!(v("2*3+4*5"), 26.0);
    assert_eq!(v("2^-1"), 0.5);
}

fn f_expr(src: &'static str) -> impl Fn(f64, f64) -> annulus_bvp::Result<f64> {
    let e = Expr::parse(src, VarSet::TU).unwrap();
    move |t, u| Ok(e.eval_tu(t, u)?)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ratio_extrema_sandwich_samples(
        which in 0usize..4,
        big_u in 0.1..10.0f64,
        probes in prop::collection::vec((0.25..0.75f64, 0.0..1.0f64), 100),
    ) {
        let src = ["u^2/(1+u)", "u/(1+u)", "u^3+u/2", "sqrt(u)+u/2*(1+t)"][which];
        let f = f_expr(src);
        let u_min = 1e-8 * big_u;
        let g = RatioGrid::default();
        let lo = min_ratio(&f, (0.25, 0.75), big_u, u_min, g).unwrap().value;
        let hi = max_ratio(&f, (0.25, 0.75), big_u, u_min, g).unwrap().value;
        for (t, x) in probes {
            let u = u_min * (big_u / u_min).powf(x);
            let r = f(t, u).unwrap() / u;
            prop_assert!(lo <= r * (1.0 + 1e-12) && r <= hi * (1.0 + 1e-12), "{} at ({}, {}): {} not in [{}, {}]", src, t, u, r, lo, hi);
        }
    }

    #[test]
    fn ratio_extrema_scale_with_f(which in 0usize..3, big_u in 0.1..10.0f64) {
        let src = ["u^2/(1+u)", "u/(1+u)*(2+t)", "u^3+u/2"][which];
        let f = f_expr(src);
        let twice = |t: f64, u: f64| Ok(2.0 * f(t, u)?);
        let g = RatioGrid::default();
        let a = min_ratio(&f, (0.0, 1.0), big_u, 1e-8 * big_u, g).unwrap().value;
        let b = min_ratio(twice, (0.0, 1.0), big_u, 1e-8 * big_u, g).unwrap().value;
        prop_assert!((b - 2.0 * a).abs() <= 4.0 * f64::EPSILON * b.abs());
        let a = max_ratio(&f, (0.0, 1.0), big_u, 1e-8 * big_u, g).unwrap().value;
        let b = max_ratio(twice, (0.0, 1.0), big_u, 1e-8 * big_u, g).unwrap().value;
        prop_assert!((b - 2.0 * a).abs() <= 4.0 * f64::EPSILON * b.abs());
    }

    #[test]
    fn operator_preserves_the_cone(values in prop::collection::vec(0.0..3.0f64, 63), lambda in 0.1..50.0f64) {
        let mut v = vec![0.0];
        v.extend(values);
        v.push(0.0);
        let u = GridFunction::new(v).unwrap();
        let bvp = ReducedBvp::parse("1+t", "u/(1+u)+u^2").unwrap();
        let tu = apply_t(&u, lambda, &bvp).unwrap();
        prop_assert_eq!(tu.values()[0], 0.0);
        prop_assert_eq!(tu.values()[64], 0.0);
        prop_assert!(tu.values().iter().all(|x| *x >= 0.0));
        let scale = tu.sup_norm().max(1.0);
        for d in tu.second_differences() {
            prop_assert!(d <= 1e-10 * scale, "second difference {}", d);
        }
    }
}

#[test]
fn ratio_refinement_is_monotone() {
    let f = f_expr("u*((u-1.3)^2+1+t)");
    let coarse = RatioGrid { n_t: 8, n_u: 32 };
    let fine = RatioGrid { n_t: 16, n_u: 64 };
    let a = min_ratio(&f, (0.0, 1.0), 3.0, 0.01, coarse).unwrap().value;
    let b = min_ratio(&f, (0.0, 1.0), 3.0, 0.01, fine).unwrap().value;
    assert!(b <= a + 1e-9);
    let a = max_ratio(&f, (0.0, 1.0), 3.0, 0.01, coarse).unwrap().value;
    let b = max_ratio(&f, (0.0, 1.0), 3.0, 0.01, fine).unwrap().value;
    assert!(b >= a - 1e-9);
}

#[test]
fn eigenvalue_scales_inversely_with_weight() {
    for (name, m) in [("1", (|_t: f64| 1.0) as fn(f64) -> f64), ("1+t", |t: f64| 1.0 + t), ("4/(2-t)^4", |t: f64| 4.0 / (2.0 - t).powi(4))] {
        let base = first_eigen_shoot(|t| Ok(m(t)), ShootConfig::default()).unwrap().lambda1;
        for c in [0.5, 2.0, 10.0] {
            let scaled = first_eigen_shoot(|t| Ok(c * m(t)), ShootConfig::default()).unwrap().lambda1;
            let rel = (scaled * c - base).abs() / base;
            assert!(rel <= 1e-8, "m = {name}, c = {c}: relative error {rel}");
        }
    }
}

#[test]
fn eigenvalue_decreases_with_weight() {
    let one = first_eigen_shoot(|_| Ok(1.0), ShootConfig::default()).unwrap().lambda1;
    let more = first_eigen_shoot(|t| Ok(1.0 + t), ShootConfig::default()).unwrap().lambda1;
    assert!(more < one);
}

#[test]
fn eigenfunction_shape_and_residual() {
    let r = first_eigen_shoot(|t| Ok(1.0 + t), ShootConfig::default()).unwrap();
    let v = r.phi.values();
    let n = v.len();
    assert_eq!((v[0], v[n - 1]), (0.0, 0.0));
    assert!(v[1..n - 1].iter().all(|x| *x > 0.0));
    assert!(v[1] > 0.0 && v[n - 2] > 0.0);
    assert!((r.phi.sup_norm() - 1.0).abs() < 1e-15);
    let h2 = r.phi.step().powi(2);
    let worst = (1..n - 1)
        .map(|i| ((v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2 + r.lambda1 * (1.0 + r.phi.t(i)) * v[i]).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-4 * r.lambda1, "residual {worst}");
    let fd = first_eigen_fd(|t| Ok(1.0 + t), 512).unwrap();
    assert!((fd.lambda1 - r.lambda1).abs() / r.lambda1 < 1e-6);
}

#[test]
fn operator_rows_agree_for_any_quadrature_order() {
    let bvp = ReducedBvp::unit_weight("u^2+1").unwrap();
    let u = GridFunction::from_fn(129, |t| t * (1.0 - t)).unwrap();
    let a = KernelOperator::with_points(&bvp, 129, 4).unwrap().apply(&u, 1.0, &bvp).unwrap();
    let b = KernelOperator::with_points(&bvp, 129, 8).unwrap().apply(&u, 1.0, &bvp).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).abs() < 1e-14);
    }
}
