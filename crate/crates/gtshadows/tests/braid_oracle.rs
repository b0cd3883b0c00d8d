//! Independent verification of the sigma-conjugation tables and the
//! braid-word identities against the faithful action of the braid group on
//! a free group of rank 4 (`s_i`: `t_i -> t_i t_{i+1} t_i^-1`,
//! `t_{i+1} -> t_i`, other generators fixed). Two braid words are equal in
//! the 4-strand group exactly when their actions agree on every generator,
//! so this route is independent of the permutation quotients.

use gtshadows::braidq::{conj_neg_b3, conj_neg_b4, conj_pos_b3, conj_pos_b4, xij_sigma_word};
use gtshadows::words::{parse_word, Sym, Word};

// Free-group generators t1..t4, borrowed symbols: the oracle only uses free
// reduction so any four distinct symbols do.
const T: [Sym; 4] = [Sym::X12, Sym::X23, Sym::X13, Sym::X14];

#[derive(Clone, PartialEq, Eq, Debug)]
struct FreeAuto {
    images: [Word; 4],
}

impl FreeAuto {
    fn identity() -> FreeAuto {
        FreeAuto { images: T.map(Word::gen) }
    }

    fn apply(&self, w: &Word) -> Word {
        w.substitute(|sym| {
            T.iter()
                .position(|&t| t == sym)
                .map(|i| self.images[i].clone())
        })
        .expect("word over t1..t4")
    }

    /// `self` after `other`: `(self * other)(t) = self(other(t))`.
    fn compose(&self, other: &FreeAuto) -> FreeAuto {
        FreeAuto { images: other.images.clone().map(|w| self.apply(&w)) }
    }
}

fn sigma_auto(k: usize, positive: bool) -> FreeAuto {
    let mut images = T.map(Word::gen);
    let (a, b) = (k - 1, k);
    if positive {
        images[a] = Word::gen(T[a]).concat(&Word::gen(T[b])).concat(&Word::gen(T[a]).inverse());
        images[b] = Word::gen(T[a]);
    } else {
        images[a] = Word::gen(T[b]);
        images[b] = Word::gen(T[b])
            .inverse()
            .concat(&Word::gen(T[a]))
            .concat(&Word::gen(T[b]));
    }
    FreeAuto { images }
}

/// Expands x-generators and c into sigma words, then folds the per-letter
/// automorphisms left to right.
fn braid_auto(w: &Word) -> FreeAuto {
    let sigma_only = w
        .substitute(|sym| {
            Some(match sym {
                Sym::S1 | Sym::S2 | Sym::S3 => Word::gen(sym),
                Sym::X12 => xij_sigma_word(1, 2),
                Sym::X23 => xij_sigma_word(2, 3),
                Sym::X13 => xij_sigma_word(1, 3),
                Sym::X14 => xij_sigma_word(1, 4),
                Sym::X24 => xij_sigma_word(2, 4),
                Sym::X34 => xij_sigma_word(3, 4),
                Sym::C => xij_sigma_word(2, 3)
                    .concat(&xij_sigma_word(1, 2))
                    .concat(&xij_sigma_word(1, 3)),
            })
        })
        .expect("total assignment");
    let mut acc = FreeAuto::identity();
    for &(sym, exp) in sigma_only.letters() {
        let k = match sym {
            Sym::S1 => 1,
            Sym::S2 => 2,
            Sym::S3 => 3,
            _ => unreachable!("sigma-only word"),
        };
        let step = sigma_auto(k, exp > 0);
        for _ in 0..exp.unsigned_abs() {
            acc = acc.compose(&step);
        }
    }
    acc
}

fn assert_braid_eq(lhs: &Word, rhs: &Word, context: &str) {
    assert_eq!(
        braid_auto(lhs),
        braid_auto(rhs),
        "{context}: {} vs {}",
        lhs.display_full(),
        rhs.display_full()
    );
}

fn w(text: &str) -> Word {
    parse_word(text).unwrap()
}

#[test]
fn artin_action_respects_braid_relations() {
    assert_braid_eq(&w("s1 s2 s1"), &w("s2 s1 s2"), "braid relation 12");
    assert_braid_eq(&w("s2 s3 s2"), &w("s3 s2 s3"), "braid relation 23");
    assert_braid_eq(&w("s1 s3"), &w("s3 s1"), "far commutation");
    assert_braid_eq(&w("s1 s1^-1"), &Word::identity(), "cancellation");
    // the action is non-trivial
    assert_ne!(braid_auto(&w("s1")), FreeAuto::identity());
}

#[test]
fn center_identities() {
    let c = w("s1 s2 s1 s2 s1 s2");
    assert_braid_eq(&w("x23 x12 x13"), &c, "c = x23 x12 x13");
    assert_braid_eq(&w("x12 x13 x23"), &c, "c = x12 x13 x23");
    assert_braid_eq(&w("x13 x23 x12"), &c, "c = x13 x23 x12");
    // c is central in the 3-strand group
    for g in ["s1", "s2", "x12", "x23", "x13"] {
        let lhs = w(g).concat(&w("c"));
        let rhs = w("c").concat(&w(g));
        assert_braid_eq(&lhs, &rhs, "centrality");
    }
    // the identities used to rewrite hexagon powers
    assert_braid_eq(&w("x13 x23"), &w("x12^-1 c"), "x13 x23 = x12^-1 c");
    assert_braid_eq(&w("x12 x13"), &w("x23^-1 c"), "x12 x13 = x23^-1 c");
}

#[test]
fn three_strand_conjugation_tables_are_braid_identities() {
    for k in [1usize, 2] {
        let s = if k == 1 { "s1" } else { "s2" };
        for sym in [Sym::X12, Sym::X23, Sym::X13, Sym::C] {
            let lhs = w(&format!("{s}^-1 {} {s}", sym.name()));
            assert_braid_eq(&lhs, &conj_pos_b3(k, sym), "b3 positive table");
            let lhs = w(&format!("{s} {} {s}^-1", sym.name()));
            assert_braid_eq(&lhs, &conj_neg_b3(k, sym), "b3 negative table");
        }
    }
}

#[test]
fn four_strand_conjugation_tables_are_braid_identities() {
    let xs = [Sym::X12, Sym::X23, Sym::X13, Sym::X14, Sym::X24, Sym::X34];
    for k in [1usize, 2, 3] {
        let s = format!("s{k}");
        for sym in xs {
            let lhs = w(&format!("{s}^-1 {} {s}", sym.name()));
            assert_braid_eq(&lhs, &conj_pos_b4(k, sym), "b4 positive table");
            let lhs = w(&format!("{s} {} {s}^-1", sym.name()));
            assert_braid_eq(&lhs, &conj_neg_b4(k, sym), "b4 negative table");
        }
    }
}

#[test]
fn printed_conjugation_identities() {
    assert_braid_eq(&w("s1^-1 x23 s1"), &w("x13"), "first printed identity");
    assert_braid_eq(&w("s2^-1 x12 s2"), &w("x23^-1 x12^-1 c"), "second printed identity");
    assert_braid_eq(&w("s2^-1 x13 s2"), &w("x12"), "third printed identity");
}

#[test]
fn xij_words_satisfy_defining_commutations() {
    // disjoint-index generators commute
    assert_braid_eq(
        &w("x12 x34"),
        &w("x34 x12"),
        "x12 and x34 commute",
    );
    assert_braid_eq(
        &w("x23 x14"),
        &w("x14 x23"),
        "x23 and x14 commute",
    );
}
