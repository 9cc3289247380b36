use arclab::arc::{dual_arc, extensions, glynn, hyperoval, is_arc, kestenband, nrc, segre_3space, Arc, OPolynomial};
use arclab::classify::{census, is_conic_arc};
use arclab::codes::LinearCode;
use arclab::envelope::{complete_via_envelope, linear_factors, sbbt_envelope, tangent_dual_points};
use arclab::extend::extendability_verdict;
use arclab::geometry::{hyperplane_coordinates, project, LinearForm};
use arclab::gf::{Elem, Field};
use arclab::linalg::Matrix;
use arclab::tangent::{build_scaled_system, build_scaled_system_with};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn gf(q: u32) -> Field {
    Field::of_order(q).unwrap()
}

/// A sub-arc of the NRC in PG(k−1, q) with at least `min` points.
fn nrc_subarc(qs: &'static [u32], k: usize, min: fn(u32, usize) -> usize) -> impl Strategy<Value = Arc> {
    prop::sample::select(qs).prop_flat_map(move |q| {
        let n = q as usize + 1;
        subsequence((0..n).collect::<Vec<_>>(), min(q, k).min(n)..=n)
            .prop_map(move |idx| nrc(k, &gf(q)).unwrap().subset(&idx))
    })
}

#[test]
fn constructions_respect_the_trivial_bound() {
    let mut arcs = vec![glynn(&gf(9)).unwrap(), kestenband(&gf(9), None).unwrap(), segre_3space(1, &gf(8)).unwrap()];
    for q in [4, 8, 16] {
        arcs.push(hyperoval(OPolynomial::Regular, &gf(q)).unwrap());
    }
    for k in 3..=6 {
        arcs.push(nrc(k, &gf(7)).unwrap());
    }
    for a in arcs {
        assert!((a.len() as u32) < a.field().q() + a.k() as u32, "{a}");
        assert!(a.t() >= 0);
    }
}

#[test]
fn complete_conics_have_no_linear_envelope_factor() {
    for q in [5, 7, 9, 11] {
        let env = sbbt_envelope(&nrc(3, &gf(q)).unwrap()).unwrap();
        assert!(linear_factors(&env.phi).unwrap().is_empty(), "q = {q}");
    }
}

#[test]
fn census_is_stable_across_worker_counts() {
    let f = gf(7);
    let run = |n| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        pool.install(|| census(&f, 3, 6, true).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(serde_json::to_string(&a.representatives).unwrap(), serde_json::to_string(&b.representatives).unwrap());
    assert_eq!(a.stats.arcs_found, b.stats.arcs_found);
    for r in a.arcs().unwrap() {
        assert!(is_arc(r.field(), 3, r.points()).unwrap().is_arc);
        assert!(extensions(&r).unwrap().is_empty());
    }
}

#[test]
fn projection_of_twisted_cubic_lies_on_a_conic() {
    for q in [5, 7, 9] {
        let f = gf(q);
        let a = nrc(4, &f).unwrap();
        for centre in [0, q as usize / 2, q as usize] {
            let x = a.point(centre);
            // a coordinate hyperplane missing the centre
            let j = x.iter().position(|c| !c.is_zero()).unwrap();
            let mut coeffs = vec![f.zero(); 4];
            coeffs[j] = f.one();
            let pi = LinearForm::new(&f, &coeffs).unwrap();
            let rest: Vec<Vec<Elem>> = (0..a.len()).filter(|&i| i != centre).map(|i| a.point(i).to_vec()).collect();
            let img = hyperplane_coordinates(&f, &pi, &project(&f, &rest, x, &pi).unwrap()).unwrap();
            let planar = Arc::new(&f, 3, img).unwrap();
            assert!(is_conic_arc(&planar).unwrap(), "q = {q}, centre {centre}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_of_dual_has_the_same_code(a in nrc_subarc(&[5, 7], 3, |_, k| k + 2)) {
        let dd = dual_arc(&dual_arc(&a).unwrap()).unwrap();
        prop_assert_eq!(LinearCode::from_arc(&dd).unwrap(), LinearCode::from_arc(&a).unwrap());
    }

    #[test]
    fn arc_codes_are_mds(a in nrc_subarc(&[5, 7], 4, |_, k| k + 1), msg in prop::collection::vec(0u32..5, 4)) {
        let f = a.field().clone();
        let code = LinearCode::from_arc(&a).unwrap();
        let n = a.len();
        prop_assert_eq!(code.min_distance().unwrap(), n - 4 + 1);
        let m: Vec<Elem> = msg.iter().map(|&x| f.elem(x).unwrap()).collect();
        if m.iter().any(|x| !x.is_zero()) {
            let zeros = code.encode(&m).iter().filter(|x| x.is_zero()).count();
            prop_assert!(zeros <= 3);
        }
    }

    #[test]
    fn singleton_bound_on_random_codes(entries in prop::collection::vec(0u32..5, 3 * 7)) {
        let f = gf(5);
        let rows: Vec<Vec<Elem>> = entries.chunks(7).map(|r| r.iter().map(|&x| f.elem(x).unwrap()).collect()).collect();
        let m = Matrix::from_rows(&f, &rows, 7).unwrap();
        prop_assume!(m.rank() == 3);
        let code = LinearCode::new(m).unwrap();
        prop_assert!(code.min_distance().unwrap() <= 7 - 3 + 1);
    }

    #[test]
    fn g_is_nonzero_and_sums_vanish(
        a in nrc_subarc(&[7, 11], 4, |q, k| (q as usize + 2 * k).div_ceil(2)),
        pick in any::<prop::sample::Index>(),
        pick_s in any::<prop::sample::Index>(),
    ) {
        let sys = build_scaled_system(&a).unwrap();
        let g = sys.g_function();
        let (n, k, t) = (a.len(), a.k(), sys.t());
        prop_assume!(n >= k + t);
        for c in itertools::Itertools::combinations(0..n, k - 1) {
            prop_assert!(!g.get(&c).unwrap().is_zero());
        }
        let es: Vec<Vec<usize>> = itertools::Itertools::combinations(0..n, k + t).collect();
        let e = pick.get(&es);
        let ss: Vec<Vec<usize>> = itertools::Itertools::combinations(e.iter().copied(), k - 2).collect();
        let s = pick_s.get(&ss);
        prop_assert!(sys.sum_equation(e, s).unwrap().is_zero());
    }

    #[test]
    fn lemma_of_tangents_ignores_base(
        a in nrc_subarc(&[7], 4, |_, k| k + 2),
        base in 1u32..7,
        xyz in subsequence((0..8usize).collect::<Vec<_>>(), 4).prop_shuffle(),
    ) {
        let f = a.field().clone();
        prop_assume!(xyz.iter().all(|&i| i < a.len()));
        let one = build_scaled_system(&a).unwrap();
        let other = build_scaled_system_with(&a, f.elem(base).unwrap()).unwrap();
        let d = [xyz[0]];
        let r1 = one.check_lemma_of_tangents(&d, xyz[1], xyz[2], xyz[3]).unwrap();
        let r2 = other.check_lemma_of_tangents(&d, xyz[1], xyz[2], xyz[3]).unwrap();
        prop_assert!(r1);
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn envelope_completes_conic_subarcs(
        a in nrc_subarc(&[7, 9, 11], 3, |q, _| (2 * q as usize + 6).div_ceil(3)),
    ) {
        let env = sbbt_envelope(&a).unwrap();
        prop_assert!(env.checked > 0);
        for z in tangent_dual_points(&a).unwrap() {
            prop_assert!(env.phi.eval(&z).unwrap().is_zero());
        }
        let c = complete_via_envelope(&a).unwrap();
        prop_assert_eq!(c.point_set(), nrc(3, a.field()).unwrap().point_set());
    }

    #[test]
    fn verdict_ignores_point_order(perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle()) {
        let g = nrc(3, &gf(7)).unwrap().subset(&[0, 1, 2, 3, 4, 5]);
        let h = g.subset(&perm);
        for target in [7, 8, 9] {
            prop_assert_eq!(
                extendability_verdict(&g, target).unwrap().label(),
                extendability_verdict(&h, target).unwrap().label()
            );
        }
    }
}
