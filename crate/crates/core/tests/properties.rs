use proptest::prelude::*;
use rand::Rng;

use marginal_choice::availability::construct_mu_traced;
use marginal_choice::domain::full_mask;
use marginal_choice::generators::{
    gen_ircs, gen_rum, random_availability, random_choice, random_dataset, random_full_support_mu,
    random_gamma, random_luce_weights, random_mu, random_order, random_order_distribution,
    random_pair_covering_mu, random_singleton_support_mu, random_tsc, rng,
};
use marginal_choice::ircs::t_by_alternative;
use marginal_choice::prelude::*;
use marginal_choice::rational::{one, to_f64, zero};

fn alphabetic(mu: MenuDistribution, lambda: ChoiceDistribution) -> MarginalDataset {
    let n = mu.n();
    MarginalDataset::new(Universe::alphabetic(n).unwrap(), mu, lambda).unwrap()
}

/// `sum of lambda over A >= sum of mu(y) over menus y inside A`, for every nonempty A.
fn direct_scan(data: &MarginalDataset) -> bool {
    (1..=full_mask(data.n())).all(|mask| {
        let forced: Rational = data
            .mu
            .iter()
            .filter(|(m, _)| m.is_subset_of_mask(mask))
            .map(|(_, w)| w.clone())
            .sum();
        data.lambda.mass(mask) >= forced
    })
}

fn random_game<R: Rng>(r: &mut R, n: usize) -> CooperativeGame {
    let full = full_mask(n) as usize;
    let values = (0..=full)
        .map(|mask| match mask {
            0 => zero(),
            m if m == full => one(),
            _ => rat(r.random_range(-20..=20), r.random_range(1..=7)),
        })
        .collect();
    CooperativeGame::from_values(n, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn mobius_inverts_cumulative_on_any_game(seed in any::<u64>(), n in 1usize..=6) {
        let v = random_game(&mut rng(seed), n);
        prop_assert_eq!(CooperativeGame::from_mobius(&mobius(&v)).unwrap(), v);
    }

    #[test]
    fn menu_games_are_totally_monotone(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let support = r.random_range(1..=full_mask(n) as usize);
        let class = classify(&game_from_mu(&random_mu(&mut r, n, support)));
        prop_assert!(class.totally_monotone && class.convex);
    }

    #[test]
    fn extreme_points_and_their_mixtures_are_in_the_core(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let support = r.random_range(1..=full_mask(n) as usize);
        let mu = random_mu(&mut r, n, support);
        let v = game_from_mu(&mu);
        let nu = random_order_distribution(&mut r, n, 3);
        let mut mix = vec![zero(); n];
        for (o, w) in nu.iter() {
            let p = extreme_point(&v, o).unwrap();
            prop_assert!(core_contains(&v, &p).unwrap().member);
            for (m, x) in mix.iter_mut().zip(p.as_slice()) {
                *m += w * x;
            }
        }
        prop_assert!(core_contains(&v, &ChoiceDistribution::new(mix).unwrap()).unwrap().member);
    }

    #[test]
    fn complementary_inequalities_agree(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let data = random_dataset(&mut r, n);
        let full = full_mask(n);
        let lower = (1..full).all(|mask| {
            let inside: Rational = data.mu.iter().filter(|(m, _)| m.is_subset_of_mask(mask)).map(|(_, w)| w.clone()).sum();
            data.lambda.mass(mask) >= inside
        });
        let upper = (1..full).all(|mask| {
            let touching: Rational = data.mu.iter().filter(|(m, _)| m.intersects_mask(mask)).map(|(_, w)| w.clone()).sum();
            data.lambda.mass(mask) <= touching
        });
        prop_assert_eq!(lower, upper);
    }

    #[test]
    fn flow_matches_direct_scan_and_witness_verifies(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let data = random_dataset(&mut r, n);
        let result = rationalize(&data);
        prop_assert_eq!(result.feasible, direct_scan(&data));
        prop_assert_eq!(result.feasible, core_contains(&game_from_mu(&data.mu), &data.lambda).unwrap().member);
        if let Some(pi) = result.choice_function(n, &data.mu.support().collect::<Vec<_>>()) {
            prop_assert!(pi.rationalizes(&data));
            for (menu, d) in pi.iter() {
                prop_assert_eq!(d.support_mask() & !menu.bits(), 0);
            }
        }
    }

    #[test]
    fn rum_decomposition_reconstructs_lambda(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let mu = random_full_support_mu(&mut r, n);
        let lambda = if r.random_bool(0.5) {
            gen_rum(&mu, &random_order_distribution(&mut r, n, 4)).unwrap()
        } else {
            random_choice(&mut r, n)
        };
        let data = alphabetic(mu, lambda);
        match rum_rationalize(&data, OrderCap::default()) {
            Ok(nu) => {
                prop_assert!(rationalize(&data).feasible);
                prop_assert_eq!(nu.marginal(&data.mu), data.lambda.clone());
                for mask in 1..full_mask(n) {
                    let menu = Menu::new(mask).unwrap();
                    if inferior_test(&data, menu).unwrap() {
                        for (o, _) in nu.iter() {
                            prop_assert!(o.ranks_below(mask));
                        }
                    }
                }
            }
            Err(Error::NotRationalizable { .. }) => prop_assert!(!rationalize(&data).feasible),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn superiority_bound_brackets_generating_orders(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let mu = random_full_support_mu(&mut r, n);
        let nu = random_order_distribution(&mut r, n, 3);
        let data = alphabetic(mu.clone(), gen_rum(&mu, &nu).unwrap());
        let full = full_mask(n);
        for mask in 1..full {
            let bound = match superiority_bound(&data, Menu::new(mask).unwrap()) {
                Ok(b) => b,
                Err(Error::DegenerateDenominator(_)) => continue,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            let above = nu.inferior_probability(full & !mask);
            let below = nu.inferior_probability(mask);
            prop_assert!(above <= bound && bound <= one() - below);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn luce_round_trip(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let mu = random_pair_covering_mu(&mut r, n);
        let u = random_luce_weights(&mut r, n);
        let lambda = luce_forward(&mu, &u).unwrap();
        prop_assert!(interior_test(&game_from_mu(&mu), &lambda).unwrap());
        let data = alphabetic(mu, lambda);
        prop_assert!(rum_rationalize(&data, OrderCap::default()).is_ok());
        let inv = luce_invert(&data).unwrap();
        for (x, w) in inv.weights.iter().zip(u.as_slice()) {
            prop_assert!((x - to_f64(w)).abs() < 1e-8);
        }
    }

    #[test]
    fn exchangeable_pairs_order_like_their_weights(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        // Symmetric in every pair: the weight of a menu depends only on its size.
        let by_size: Vec<u32> = (0..=n).map(|_| r.random_range(1..=5)).collect();
        let masks: Vec<u32> = (1..=full_mask(n)).filter(|m| m.count_ones() >= 2).collect();
        let total: u32 = masks.iter().map(|m| by_size[m.count_ones() as usize]).sum();
        let mu = MenuDistribution::from_pairs(
            n,
            masks.iter().map(|&m| (Menu::new(m).unwrap(), rat(by_size[m.count_ones() as usize] as i64, total as i64))),
        ).unwrap();
        let u = random_luce_weights(&mut r, n);
        let lambda = luce_forward(&mu, &u).unwrap();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    prop_assert!(exchangeable(&mu, a, b).unwrap());
                    prop_assert_eq!(lambda[a] >= lambda[b], u.as_slice()[a] >= u.as_slice()[b]);
                }
            }
        }
    }

    #[test]
    fn ircs_forward_and_recursion_are_inverse(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let mu = random_singleton_support_mu(&mut r, n);
        let order = random_order(&mut r, n);
        let gamma = random_gamma(&mut r, n);
        let lambda = ircs_forward(&mu, &order, &gamma).unwrap();
        prop_assert_eq!(lambda.as_slice().iter().cloned().sum::<Rational>(), one());
        let data = gen_ircs(Universe::alphabetic(n).unwrap(), mu, &order, &gamma).unwrap();
        let t = ircs_t_vector(&data, &order).unwrap();
        prop_assert_eq!(t_by_alternative(&order, &t), gamma.iter().cloned().map(Some).collect::<Vec<_>>());
        let solutions = ircs_rationalize(&data, OrderCap::default()).unwrap();
        prop_assert!(solutions.iter().any(|s| s.order == order && s.gamma == gamma));
        for s in &solutions {
            prop_assert_eq!(ircs_forward(&data.mu, &s.order, &s.gamma).unwrap(), data.lambda_star());
        }
    }

    #[test]
    fn full_consideration_is_unique(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let mu = random_full_support_mu(&mut r, n);
        let order = random_order(&mut r, n);
        let gamma = vec![one(); n];
        let data = gen_ircs(Universe::alphabetic(n).unwrap(), mu, &order, &gamma).unwrap();
        let solutions = ircs_rationalize(&data, OrderCap::default()).unwrap();
        prop_assert_eq!(solutions.len(), 1);
        prop_assert_eq!(&solutions[0].order, &order);
    }

    #[test]
    fn tsc_witness_respects_bars(seed in any::<u64>(), n in 1usize..=5) {
        let (data, collection) = random_tsc(&mut rng(seed), n);
        let report = analyze_collection(&collection);
        let v = game_from_mu(&data.mu);
        let modified = game_tsc(&data.mu, &collection).unwrap();
        for mask in 0..=full_mask(n) {
            prop_assert!(modified.value(mask) >= v.value(mask));
        }
        match tsc_rationalize(&data, &collection).unwrap() {
            TscVerdict::Rationalizable { pi } => {
                prop_assert!(pi.rationalizes(&data));
                for (menu, d) in pi.iter() {
                    prop_assert_eq!(d.support_mask() & !report.bar_mask(menu), 0);
                }
                prop_assert!(core_contains(&v, &data.lambda).unwrap().member);
            }
            other => prop_assert!(false, "generated data rejected: {:?}", other),
        }
    }

    #[test]
    fn tsc_core_agrees_with_bar_flow(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let (generated, collection) = random_tsc(&mut r, n);
        let lambda = if r.random_bool(0.5) { random_choice(&mut r, n) } else { generated.lambda.clone() };
        let data = alphabetic(generated.mu, lambda);
        let report = analyze_collection(&collection);
        let verdict = tsc_rationalize(&data, &collection).unwrap();
        if let TscVerdict::RedundantInSupport { .. } = verdict {
            return Ok(());
        }
        let sources = data.mu.iter().map(|(m, w)| (w.clone(), report.bar[&m].unwrap())).collect();
        let flow = solve_flow(&FlowProblem::new(sources, data.lambda.clone()).unwrap());
        prop_assert_eq!(verdict.is_rationalizable(), flow.feasible);
    }

    #[test]
    fn pf_acceptance_implies_core_membership(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let (generated, collection) = random_tsc(&mut r, n);
        let lambda = if r.random_bool(0.5) { random_choice(&mut r, n) } else { generated.lambda.clone() };
        let data = alphabetic(generated.mu, lambda);
        if pf_rationalize(&data, &collection).unwrap() == PfVerdict::Rationalizable {
            prop_assert!(core_contains(&game_from_mu(&data.mu), &data.lambda).unwrap().member);
        }
    }

    #[test]
    fn availability_construction_is_exact(seed in any::<u64>(), n in 1usize..=6) {
        let (xi, lambda) = random_availability(&mut rng(seed), n);
        prop_assert!(potentially_rationalizable(&xi, &lambda).unwrap());
        let (mu, iterations) = construct_mu_traced(&xi, &lambda).unwrap();
        prop_assert!(iterations <= n << (n - 1));
        prop_assert_eq!(AvailabilityVector::of(&mu), xi);
        prop_assert!(rationalize(&alphabetic(mu, lambda)).feasible);
    }

    #[test]
    fn inferior_sets_form_a_chain(seed in any::<u64>(), n in 2usize..=5) {
        let mut r = rng(seed);
        let mu = random_full_support_mu(&mut r, n);
        let nu = random_order_distribution(&mut r, n, 2);
        let data = alphabetic(mu.clone(), gen_rum(&mu, &nu).unwrap());
        let chain = inferior_chain(&data).unwrap();
        for menu in &chain {
            prop_assert!(nu.iter().all(|(o, _)| o.ranks_below(menu.bits())), "{:?}", menu);
        }
    }
}
