mod common;

use common::{fuchsian, random_word, rng};
use hitchin_core::current::*;
use hitchin_core::lengths::length_vector;
use hitchin_core::word::{conjugacy_class, ConjugacyClass, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_combo(r: &mut ChaCha8Rng, terms: usize) -> CurrentCombo {
    let mut c = CurrentCombo::new();
    for _ in 0..terms {
        let w = random_word(r, 1, 6);
        c.add_term(conjugacy_class(&w).unwrap(), r.random_range(-3.0..3.0));
    }
    c
}

fn class(s: &str) -> ConjugacyClass {
    conjugacy_class(&s.parse().unwrap()).unwrap()
}

#[test]
fn linearity_on_random_combos() {
    let mut r = rng(2);
    for n in [3, 4] {
        let rep = fuchsian(n);
        for _ in 0..10 {
            let (alpha, beta) = (random_combo(&mut r, 10), random_combo(&mut r, 10));
            let (a, b) = (r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
            let mix = combo_arith(a, &alpha, b, &beta);
            for i in 0..n {
                let lhs = current_length(&rep, &mix, i).unwrap();
                let la = current_length(&rep, &alpha, i).unwrap();
                let lb = current_length(&rep, &beta, i).unwrap();
                let rhs = a * la + b * lb;
                let scale = 1.0 + (a * la).abs() + (b * lb).abs();
                assert!((lhs - rhs).abs() <= 1e-10 * scale);
            }
        }
    }
}

#[test]
fn homogeneity() {
    let rep = fuchsian(3);
    let w: Word = "a1 b2 A2".parse().unwrap();
    let l = length_vector(&rep, &w).unwrap();
    let c = CurrentCombo::from_word(&w, 2.5).unwrap();
    for i in 0..3 {
        assert!((current_length(&rep, &c, i).unwrap() - 2.5 * l[i]).abs() <= 1e-12 * (1.0 + l[i].abs()));
    }
}

#[test]
fn flip_and_sum_rules() {
    let mut r = rng(8);
    for n in [3, 5] {
        let rep = fuchsian(n);
        let deformed = hitchin_core::rep::deform(&fuchsian(3), 2, 1e-3).unwrap();
        for _ in 0..10 {
            let alpha = random_combo(&mut r, 6);
            let flipped = pullback_r(&alpha);
            for src in [&rep, &deformed] {
                let m = src.n();
                let l = current_lengths(src, &alpha).unwrap();
                let lf = current_lengths(src, &flipped).unwrap();
                let total: f64 = alpha.terms().map(|(_, w)| w.abs()).sum();
                for i in 0..m {
                    assert!((lf[i] + l[m - 1 - i]).abs() <= 1e-8 * (1.0 + total));
                }
                assert!(l.iter().sum::<f64>().abs() <= 1e-8 * m as f64 * (1.0 + total));
            }
        }
    }
}

#[test]
fn unoriented_curve_lengths() {
    let mut r = rng(13);
    for n in 3..=5 {
        let rep = fuchsian(n);
        for _ in 0..50 {
            let w = random_word(&mut r, 1, 8);
            let bar = unoriented_embed(&w).unwrap();
            let l = length_vector(&rep, &w).unwrap();
            for i in 0..n {
                let expected = 0.5 * (l[i] - l[n - 1 - i]);
                let got = current_length(&rep, &bar, i).unwrap();
                assert!((got - expected).abs() <= 1e-10 * (1.0 + expected.abs()), "n={n} w={w} i={i}");
            }
            if n == 3 {
                assert!(current_length(&rep, &bar, 1).unwrap().abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn combo_examples() {
    let alpha: CurrentCombo = "1 a1\n-0.5 b1 a2".parse().unwrap();
    let beta: CurrentCombo = "2 b2".parse().unwrap();
    assert_eq!(combo_arith(1.0, &alpha, 0.0, &beta), alpha);
    assert!(combo_arith(1.0, &alpha, -1.0, &alpha).is_empty());
    let merged = combo_arith(0.5, &"1 a1".parse().unwrap(), 0.5, &"1 b1 a1 B1".parse().unwrap());
    assert_eq!(merged.len(), 1);
    assert_eq!(merged.weight(&class("a1")), 1.0);
    assert_eq!(pullback_r(&pullback_r(&alpha)), alpha);
    assert_eq!(pullback_r(&"1 a1".parse().unwrap()).weight(&class("A1")), 1.0);
    let bar = unoriented_embed(&"a1 b1".parse().unwrap()).unwrap();
    assert_eq!(bar.weight(&class("a1 b1")), 0.5);
    assert_eq!(bar.weight(&class("B1 A1")), 0.5);
    assert_eq!(pullback_r(&bar), bar);
    assert!(!alpha.is_measure_class());
    assert!(beta.is_measure_class());
}
