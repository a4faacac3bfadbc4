use esscert::catalog::four_vertex_example;
use esscert::clique::MinmaxCliqueInstance;
use esscert::corpus::{random_instance, RandomShape};
use esscert::format::{game_hash, game_to_json, instance_to_json, parse_game, parse_instance, parse_strategy_vector};
use esscert::game::SymmetricGame;
use esscert::rational::ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn game_strategy() -> impl Strategy<Value = SymmetricGame> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec((-1000i64..=1000, 1i64..=97), n * n).prop_map(move |cells| {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let matrix = cells.chunks(n).map(|row| row.iter().map(|&(p, q)| ratio(p, q)).collect()).collect();
            SymmetricGame::new(names, matrix).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn games_round_trip_exactly(game in game_strategy()) {
        let text = game_to_json(&game);
        let back = parse_game(&text).unwrap();
        prop_assert_eq!(&back, &game);
        prop_assert_eq!(game_to_json(&back), text);
        prop_assert_eq!(game_hash(&back), game_hash(&game));
    }

    #[test]
    fn instances_round_trip_exactly(seed in any::<u64>()) {
        let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), &RandomShape::default());
        let back: MinmaxCliqueInstance = parse_instance(&instance_to_json(&inst)).unwrap();
        prop_assert_eq!(back, inst);
    }
}

#[test]
fn floats_and_bad_instances_are_rejected() {
    assert!(parse_game(r#"{"strategies": ["a"], "payoffs": [[0.5]]}"#).is_err());
    assert!(parse_game(r#"{"strategies": ["a"], "payoffs": [["0.5"]]}"#).is_err());
    assert!(parse_game(r#"{"strategies": ["a", "b"], "payoffs": [["1"]]}"#).is_err());
    let k1 = r#"{"I": ["1"], "J": ["1"], "partition": {"v": ["1", "1"]}, "edges": [], "k": 1}"#;
    assert!(parse_instance(k1).is_err());
    let loop_edge = r#"{"I": ["1"], "J": ["1"], "partition": {"v": ["1", "1"]}, "edges": [["v", "v"]], "k": 2}"#;
    assert!(parse_instance(loop_edge).is_err());
    let unknown = r#"{"I": ["1"], "J": ["1"], "partition": {"v": ["1", "2"]}, "edges": [], "k": 2}"#;
    assert!(parse_instance(unknown).is_err());
    assert_eq!(parse_instance(&instance_to_json(&four_vertex_example())).unwrap(), four_vertex_example());
}

#[test]
fn strategy_vectors_must_be_normalized() {
    let game = esscert::catalog::hawk_dove();
    assert!(parse_strategy_vector(&game, "1/2,1/2").is_ok());
    assert!(parse_strategy_vector(&game, "Hawk=1").is_ok());
    assert!(parse_strategy_vector(&game, "1/2,1/3").is_err());
    assert!(parse_strategy_vector(&game, "0.5,0.5").is_err());
    assert!(parse_strategy_vector(&game, "1").is_err());
    assert!(parse_strategy_vector(&game, "Eagle=1").is_err());
}
