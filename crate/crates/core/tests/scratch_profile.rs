use ramify_core::*;
use std::time::Instant;

#[test]
fn profile_m4_weights() {
    let z = Var::new("z");
    let zp = MultiPoly::variable(&z);
    let c = SpectralCurve::validate(
        RationalFunction::from_poly(zp.pow(2)),
        RationalFunction::from_poly(&zp.pow(2) + &zp),
        &z,
    )
    .unwrap();
    let mut e = Engine::new(c);
    let vars = MixedVars::canonical(0, 4);
    let trees: Vec<Tree> = enumerate_trees(0, 4).unwrap().into_iter().collect();
    let t_all = Instant::now();
    let mut weights = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        let t0 = Instant::now();
        let w = tree_weight(&mut e, t, &vars).unwrap();
        let dt = t0.elapsed();
        if dt.as_millis() > 300 {
            eprintln!("tree {} {} took {:?} (nt {}/{})", i, t, dt, w.num().num_terms(), w.den().num_terms());
        }
        weights.push(w);
    }
    eprintln!("all 29 weights in {:?}", t_all.elapsed());
    let t0 = Instant::now();
    let mut sum = RationalFunction::zero();
    for (i, w) in weights.iter().enumerate() {
        let ti = Instant::now();
        sum = &sum + w;
        let dt = ti.elapsed();
        if dt.as_millis() > 300 {
            eprintln!("add {} took {:?} (sum nt {}/{})", i, dt, sum.num().num_terms(), sum.den().num_terms());
        }
    }
    eprintln!("sum in {:?}; final nt {}/{}", t0.elapsed(), sum.num().num_terms(), sum.den().num_terms());
}
