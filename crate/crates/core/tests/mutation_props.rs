use proptest::prelude::*;

use dp3::formula;
use dp3::quiver::{classify_model, initial_seed, Model, QuiverMatrix, Seed};
use dp3::walk::{apply_tau, apply_tau_word, prism_by_folding, prism_of, Tau, TauWord};

fn tau() -> impl Strategy<Value = Tau> {
    (0usize..5).prop_map(|i| Tau::ALL[i])
}

fn tau_word(max: usize) -> impl Strategy<Value = TauWord> {
    prop::collection::vec(tau(), 0..=max).prop_map(TauWord::new)
}

fn walk_to(word: &[usize]) -> Seed {
    initial_seed().mutate_sequence(word).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutation_is_an_involution(word in prop::collection::vec(1usize..=6, 0..4), v in 1usize..=6) {
        let s = walk_to(&word);
        prop_assert_eq!(s.mutate(v).unwrap().mutate(v).unwrap(), s);
    }

    #[test]
    fn matrix_mutation_is_an_involution(word in prop::collection::vec(1usize..=6, 0..8), v in 1usize..=6) {
        let q = word.iter().fold(QuiverMatrix::dp3(), |q, &w| q.mutate(w).unwrap());
        prop_assert_eq!(q.mutate(v).unwrap().mutate(v).unwrap(), q);
    }

    #[test]
    fn tau_words_fix_the_quiver_and_hit_the_closed_form(w in tau_word(8)) {
        let s = apply_tau_word(&initial_seed(), &w).unwrap();
        prop_assert_eq!(&s.quiver, &QuiverMatrix::dp3());
        let prism = prism_of(&w);
        for r in 0..6 {
            prop_assert_eq!(&s.cluster[r], &formula::cluster_variable(prism.0[r]));
        }
    }

    #[test]
    fn prism_by_factoring_and_by_folding_agree(w in tau_word(10)) {
        prop_assert_eq!(prism_of(&w), prism_by_folding(&w));
    }

    #[test]
    fn each_tau_undoes_itself(w in tau_word(5), t in tau()) {
        let s = apply_tau_word(&initial_seed(), &w).unwrap();
        prop_assert_eq!(apply_tau(&apply_tau(&s, t).unwrap(), t).unwrap(), s);
    }

    #[test]
    fn toric_mutations_stay_in_the_four_models(word in prop::collection::vec(0usize..6, 0..10)) {
        let mut q = QuiverMatrix::dp3();
        for pick in word {
            let toric = q.toric_vertices();
            q = q.mutate(toric[pick % toric.len()]).unwrap();
            prop_assert!(classify_model(&q).is_some());
        }
    }
}

#[test]
fn initial_quiver_is_model_one() {
    assert_eq!(classify_model(&QuiverMatrix::dp3()), Some(Model::One));
}

#[test]
fn tau_word_text_round_trip() {
    let w: TauWord = "t1 t2 t3 t1 t2 t3 t2 t1 t4".parse().unwrap();
    assert_eq!(w.to_string(), "t1 t2 t3 t1 t2 t3 t2 t1 t4");
    assert_eq!("t1t2t4".parse::<TauWord>().unwrap().len(), 3);
    assert!("t6".parse::<TauWord>().is_err());
    assert!("".parse::<TauWord>().unwrap().is_empty());
}
