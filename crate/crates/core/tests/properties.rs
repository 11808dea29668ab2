mod common;

use ndgame::families::{random_game, RandomGameParams};
use ndgame::instance::{parse_instance, serialize_instance, InstanceFile};
use ndgame::{
    analyze, best_response, enumerate_simple_paths, player_cost, potential, social_cost, Game, Limits, Path,
    StrategyProfile,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = RandomGameParams> {
    (3usize..=5, 1usize..=3, 0usize..=3, any::<bool>(), any::<bool>()).prop_map(
        |(vertices, players, extra_edges, directed, trunk)| RandomGameParams {
            vertices,
            players,
            extra_edges,
            directed,
            max_cost: 9,
            trunk,
        },
    )
}

/// A game plus a profile picked by index from the oracle's path lists.
fn game_and_profile() -> impl Strategy<Value = (Game, Vec<Vec<usize>>)> {
    (params(), any::<u64>(), prop::collection::vec(any::<prop::sample::Index>(), 3)).prop_map(
        |(params, seed, picks)| {
            let game = random_game(&params, seed);
            let profile = game
                .players
                .iter()
                .zip(&picks)
                .map(|(p, pick)| {
                    let paths = common::dfs_paths(&game, p.source, p.target);
                    paths[pick.index(paths.len())].clone()
                })
                .collect();
            (game, profile)
        },
    )
}

fn to_profile(game: &Game, edges: &[Vec<usize>]) -> StrategyProfile {
    StrategyProfile::new(
        edges.iter().zip(&game.players).map(|(e, p)| Path::from_edges(game, p.source, e.clone()).unwrap()).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn unilateral_moves_change_potential_by_the_movers_cost(
        (game, profile) in game_and_profile(),
        who in any::<prop::sample::Index>(),
        pick in any::<prop::sample::Index>(),
    ) {
        let i = who.index(game.players.len());
        let options = common::dfs_paths(&game, game.players[i].source, game.players[i].target);
        let mut moved = profile.clone();
        moved[i] = options[pick.index(options.len())].clone();
        let (before, after) = (to_profile(&game, &profile), to_profile(&game, &moved));
        let d_phi = potential(&game, &after) - potential(&game, &before);
        let d_cost = player_cost(&game, &after, i) - player_cost(&game, &before, i);
        prop_assert_eq!(&d_phi, &d_cost);
        let oracle_phi = common::potential(&game, &moved);
        prop_assert_eq!(common::pair(&potential(&game, &after)), oracle_phi);
    }

    #[test]
    fn potential_lies_between_cost_and_harmonic_multiple((game, profile) in game_and_profile()) {
        let p = to_profile(&game, &profile);
        let cost = social_cost(&game, &p);
        let phi = potential(&game, &p);
        prop_assert!(cost <= phi);
        prop_assert!(phi <= cost.scale(&common::harmonic(game.k())));
        prop_assert_eq!(common::pair(&cost), common::social_cost(&game, &profile));
    }

    #[test]
    fn best_response_matches_path_scan((game, profile) in game_and_profile(), who in any::<prop::sample::Index>()) {
        let i = who.index(game.players.len());
        let br = best_response(&game, &to_profile(&game, &profile), i).unwrap();
        prop_assert_eq!(common::pair(&br.cost), common::best_deviation(&game, &profile, i));
        let mut q = profile.clone();
        q[i] = br.path.edges().to_vec();
        prop_assert_eq!(common::player_cost(&game, &q, i), common::pair(&br.cost));
    }

    #[test]
    fn instance_text_round_trips(params in params(), seed in any::<u64>()) {
        let file = InstanceFile::named(random_game(&params, seed), "random", "property test");
        let text = serialize_instance(&file);
        prop_assert_eq!(parse_instance(&text).unwrap(), file);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn enumeration_matches_brute_force(params in params(), seed in any::<u64>()) {
        let game = random_game(&params, seed);
        for (i, p) in game.players.iter().enumerate() {
            let lib: Vec<Vec<usize>> = enumerate_simple_paths(&game, i, 10_000)
                .unwrap()
                .iter()
                .map(|p| p.edges().to_vec())
                .collect();
            let mut lib_sorted = lib.clone();
            lib_sorted.sort();
            prop_assert_eq!(lib_sorted, common::dfs_paths(&game, p.source, p.target));
        }
        let analysis = analyze(&game, &Limits::default()).unwrap();
        let brute = common::brute(&game);
        prop_assert_eq!(analysis.profile_count, brute.profiles as u128);
        let mut nash: Vec<Vec<Vec<usize>>> = analysis.nash.profiles.iter().map(|p| p.edge_ids()).collect();
        nash.sort();
        let mut expected = brute.nash.clone();
        expected.sort();
        prop_assert_eq!(nash, expected);
        prop_assert_eq!(common::pair(analysis.optimum_cost()), brute.optimum);
        prop_assert_eq!(common::pair(analysis.min_potential()), brute.min_potential);
    }

    #[test]
    fn parallel_and_sequential_scans_agree(params in params(), seed in any::<u64>()) {
        let game = random_game(&params, seed);
        let par = analyze(&game, &Limits::default()).unwrap();
        let seq = analyze(&game, &Limits::default().sequential()).unwrap();
        prop_assert_eq!(par, seq);
    }
}
