use n4char::decomp::{chi_of, decompose, r_shift_of, theta_decompose, JacobiFormInput};
use n4char::svoa::{build_rank6, trace_decompose};
use n4char::{int, rat, QSeries};

fn with_shift(shift: n4char::Rational, coeffs: &[i64], order: n4char::Rational) -> QSeries {
    let t: Vec<(i64, i64)> = coeffs.iter().enumerate().map(|(k, &c)| (k as i64, c)).collect();
    QSeries::from_int_terms(1, &t, order).shift(&shift)
}

#[test]
fn rank6_goldens() {
    let t0 = std::time::Instant::now();
    let (z, e) = build_rank6(&int(9)).unwrap();
    println!("built in {:?}", t0.elapsed());
    let g = trace_decompose(&z).unwrap();
    println!("g0 = {}\ng1 = {}", g.get(0), g.get(1));
    let g0 = with_shift(rat(-1, 4), &[1, 6, 57, 308, 1305, 4800, 15764, 47466, 133461], int(9) - rat(1, 4));
    let g1 = with_shift(int(0), &[0, 12, 92, 444, 1836, 6520, 20916, 61824, 171244], int(9));
    assert!(g.get(0).agrees_with(&g0));
    assert!(g.get(1).agrees_with(&g1));
    assert!(*g.get(1).order() > int(8));
    assert_eq!(chi_of(&e.series).unwrap(), int(2));
    let r = r_shift_of(&e.series).unwrap();
    println!("R = {r}");
    let want_r = with_shift(int(0), &[-2, -24, -232, -1256, -5448, -20432], int(6));
    assert!(r.agrees_with(&want_r), "{r}");
    let (f0, f1) = theta_decompose(&e.series).unwrap();
    assert!(f1.agrees_with(&g.get(0)));
    assert!(f0.agrees_with(&-&g.get(1)));
    let d = decompose(&JacobiFormInput::new("E", e.series.clone()).unwrap(), None).unwrap();
    println!("F = {}", d.fmock);
    // B_0 = -1 is forced by the q^{1/8} level of η^3 E = χ θ1^2 μ + F θ1^2
    assert_eq!(&d.b[..6], &[int(-1), int(-5), int(-29), int(-80), int(-253), int(-654)]);
    assert_eq!(d.a0, int(0));
}

#[test]
fn genus_leading_terms() {
    let (_, e) = build_rank6(&int(4)).unwrap();
    let e = &e.series;
    let c = |n: i64, r: i64| e.coeff(&int(n), &int(r)).unwrap();
    let rows: [(i64, [i64; 4]); 4] =
        [(0, [0, 1, 0, 0]), (1, [-12, 6, 0, 0]), (2, [-92, 57, -12, 1]), (3, [-444, 308, -92, 6])];
    for (n, want) in rows {
        for (r, w) in want.iter().enumerate() {
            assert_eq!(c(n, r as i64), int(*w), "q^{n} ζ^{r}");
            assert_eq!(c(n, -(r as i64)), int(*w), "q^{n} ζ^-{r}");
        }
    }
}
