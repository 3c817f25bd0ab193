use std::collections::VecDeque;

use bs_nerve::homology::verify_chain_complex;
use bs_nerve::localstats::extract_ball;
use bs_nerve::mmspace::{make_flat_torus, SampleMode};
use bs_nerve::nerve::{build_nerve, degree_stats, packing_degree_bound};
use bs_nerve::netgen::{assign_radii, build_almost_net, complete_to_net, NetParams, SoftKernel, WeightedNet};
use bs_nerve::{MetricMeasureSpace, SimplicialComplex};

fn params() -> NetParams {
    NetParams { r0: 0.5, r_soft: 0.75, r1: 0.75, r2: 1.5, r3: 1.65, j_levels: 3, intensity: 1.0, kernel: SoftKernel::Linear }
}

fn torus_net(side: f64, seed: u64) -> (MetricMeasureSpace, WeightedNet) {
    let s = make_flat_torus(&[side, side], SampleMode::Grid, 16.0, 0).unwrap();
    let almost = build_almost_net(&s, &params(), seed).unwrap();
    let all: Vec<usize> = (0..s.len()).collect();
    let net = assign_radii(complete_to_net(&s, &almost, &all), seed).unwrap();
    (s, net)
}

fn all_simplices(c: &SimplicialComplex) -> Vec<Vec<u32>> {
    (0..=c.k_max()).flat_map(|d| c.simplices(d).to_vec()).collect()
}

#[test]
fn enlarging_radii_only_adds_simplices() {
    let (s, net) = torus_net(8.0, 5);
    let small = build_nerve(&s, &net, 3).unwrap();
    let mut grown = net.clone();
    grown.rho = Some(net.rho.as_ref().unwrap().iter().map(|r| r + 0.05).collect());
    let big = build_nerve(&s, &grown, 3).unwrap();
    for simplex in all_simplices(&small.complex) {
        assert!(big.complex.contains(&simplex), "{simplex:?} lost");
    }
    assert!(big.complex.count(1) >= small.complex.count(1));
}

#[test]
fn nerve_invariants_and_degree_bound_across_sizes() {
    let mut bounds = Vec::new();
    for side in [8.0, 12.0, 16.0] {
        let (s, net) = torus_net(side, 2);
        let nerve = build_nerve(&s, &net, 3).unwrap();
        let c = &nerve.complex;
        assert_eq!(c.n_vertices(), net.len());
        assert!(c.dim().unwrap() <= 3);
        assert!(c.is_downward_closed());
        nerve.verify(&s, &net).unwrap();
        verify_chain_complex(c).unwrap();
        assert_eq!(c.vertex_labels().unwrap(), net.points.as_slice());
        let bound = packing_degree_bound(&s, params().r0, params().r3);
        assert!(degree_stats(c).max_degree <= bound, "degree {} above {bound}", degree_stats(c).max_degree);
        bounds.push(bound);
    }
    assert!(bounds.windows(2).all(|w| w[0] == w[1]), "{bounds:?}");
}

#[test]
fn ball_vertex_count_matches_independent_bfs() {
    let (s, net) = torus_net(8.0, 9);
    let c = build_nerve(&s, &net, 3).unwrap().complex;
    let edges = c.simplices(1);
    for root in [0u32, 7, 20] {
        let mut dist = vec![usize::MAX; c.n_vertices()];
        dist[root as usize] = 0;
        let mut queue = VecDeque::from([root as usize]);
        while let Some(u) = queue.pop_front() {
            for e in edges {
                let (a, b) = (e[0] as usize, e[1] as usize);
                let w = if a == u { b } else if b == u { a } else { continue };
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        let expected = dist.iter().filter(|&&d| d <= 2).count();
        assert_eq!(extract_ball(&c, root, 2).unwrap().complex.n_vertices(), expected);
    }
}

#[test]
fn nerve_text_round_trip() {
    let (s, net) = torus_net(8.0, 1);
    let c = build_nerve(&s, &net, 3).unwrap().complex;
    let back = SimplicialComplex::from_text(&c.to_text()).unwrap();
    assert_eq!(back.f_vector(), c.f_vector());
}
