mod common;

use hfgraph_core::document::{emit, parse_str};
use hfgraph_core::generate::{generate_document, random_hfpr};
use hfgraph_core::hfg::{Channel, Hfpr, PerChannel};
use hfgraph_core::pipeline::{aggregate_hfpr, blend_scores, rank, SimilarityBlend};
use hfgraph_core::similarity::{pair_similarity, ClosenessMode};
use hfgraph_core::spectral::{energy, eigen_identities, laplacian_energy, symmetric_eigenvalues, SquareMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{eig2, eig3, pair_similarity_oracle};

fn relation(seed: u64, n: usize) -> Hfpr {
    random_hfpr(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn scaled(h: &Hfpr, t: f64) -> Hfpr {
    let rows = h
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|e| e.map(|v| v * t)).collect())
        .collect();
    Hfpr::from_rows(rows).unwrap()
}

fn permutation(seed: u64, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energies_are_permutation_invariant(seed in any::<u64>(), n in 2usize..=8, pseed in any::<u64>()) {
        let h = relation(seed, n);
        let p = h.permuted(&permutation(pseed, n)).unwrap();
        let (a, b) = (energy(&h).unwrap(), energy(&p).unwrap());
        let (la, lb) = (laplacian_energy(&h).unwrap(), laplacian_energy(&p).unwrap());
        for ch in Channel::ALL {
            prop_assert!((a.get(ch) - b.get(ch)).abs() < 1e-10);
            prop_assert!((la.get(ch) - lb.get(ch)).abs() < 1e-10);
        }
    }

    #[test]
    fn energies_scale_linearly(seed in any::<u64>(), n in 2usize..=8, t in 0.05f64..=1.0) {
        let h = relation(seed, n);
        let s = scaled(&h, t);
        let (e, es) = (energy(&h).unwrap(), energy(&s).unwrap());
        let (l, ls) = (laplacian_energy(&h).unwrap(), laplacian_energy(&s).unwrap());
        for ch in Channel::ALL {
            prop_assert!((es.get(ch) - t * e.get(ch)).abs() < 1e-10);
            prop_assert!((ls.get(ch) - t * l.get(ch)).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_identities_hold(seed in any::<u64>(), n in 1usize..=10) {
        prop_assert!(eigen_identities(&relation(seed, n)).is_ok());
    }

    #[test]
    fn pair_similarity_symmetric_and_bounded(a in any::<u64>(), b in any::<u64>(), n in 2usize..=8) {
        let (x, y) = (relation(a, n), relation(b, n));
        let s = pair_similarity(&x, &y).unwrap();
        prop_assert_eq!(s.to_bits(), pair_similarity(&y, &x).unwrap().to_bits());
        prop_assert!(s >= 1.0 / n as f64 && s <= 1.0);
        prop_assert!((s - pair_similarity_oracle(&x.to_rows(), &y.to_rows())).abs() < 1e-12);
    }

    #[test]
    fn closeness_modes_rank_alike(seed in any::<u64>(), n in 2usize..=8) {
        let h = relation(seed, n);
        let r = rank(&h, ClosenessMode::Relative).unwrap();
        let q = rank(&h, ClosenessMode::Ratio).unwrap();
        prop_assert_eq!(r.order, q.order);
    }

    #[test]
    fn ranking_is_permutation_equivariant(seed in any::<u64>(), n in 2usize..=8, pseed in any::<u64>()) {
        let h = relation(seed, n);
        let perm = permutation(pseed, n);
        let r = rank(&h, ClosenessMode::Relative).unwrap();
        let q = rank(&h.permuted(&perm).unwrap(), ClosenessMode::Relative).unwrap();
        for (k, &old) in perm.iter().enumerate() {
            prop_assert!((q.f[k] - r.f[old]).abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_weights_keep_aggregates_valid(seed in any::<u64>(), n in 2usize..=8, w in proptest::collection::vec(0.0f64..1.0, 3)) {
        let experts: Vec<Hfpr> = (0..3).map(|k| relation(seed.wrapping_add(k), n)).collect();
        let total: f64 = w.iter().sum::<f64>().max(1e-12);
        let c: Vec<PerChannel<f64>> = w.iter().map(|v| PerChannel::splat(v / total)).collect();
        prop_assert!(aggregate_hfpr(&experts, &c).is_ok());
    }

    #[test]
    fn degenerate_blends(c in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0), 3), eta in 0.0f64..=1.0) {
        let c1: Vec<PerChannel<f64>> = c.iter().map(|&(a, b, d)| PerChannel::new(a, b, d)).collect();
        let ca = [0.2, 0.3, 0.5];
        let one = blend_scores(&c1, &ca, 1.0, 0.3, SimilarityBlend::Broadcast).unwrap();
        prop_assert_eq!(&one.c2, &c1);
        let zero = blend_scores(&c1, &ca, eta, 0.0, SimilarityBlend::Broadcast).unwrap();
        prop_assert_eq!(&zero.c, &zero.c2);
        let full = blend_scores(&c1, &ca, eta, 1.0, SimilarityBlend::Channelwise).unwrap();
        prop_assert_eq!(&full.c, &c1);
    }

    #[test]
    fn generated_documents_round_trip(seed in any::<u64>(), n in 2usize..=6, l in 2usize..=4) {
        let doc = generate_document(seed, n, l).unwrap();
        let text = emit(&doc);
        let back = parse_str(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(emit(&back), text);
    }

    #[test]
    fn eigensolver_matches_closed_forms(a in -1.0f64..1.0, b in -1.0f64..1.0, d in -1.0f64..1.0,
                                        e in -1.0f64..1.0, f in -1.0f64..1.0, g in -1.0f64..1.0) {
        let got = symmetric_eigenvalues(&SquareMatrix::from_row_major(2, vec![a, b, b, d])).unwrap();
        for (x, y) in got.eigenvalues().iter().zip(eig2(a, b, d)) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let m = [[a, b, e], [b, d, f], [e, f, g]];
        let got = symmetric_eigenvalues(&SquareMatrix::from_row_major(3, m.concat())).unwrap();
        for (x, y) in got.eigenvalues().iter().zip(eig3(&m)) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
