//! Braid-specific layer: subgroup specs and their validation, the nine
//! cosimplicial homomorphisms, construction of the derived finite quotients,
//! and evaluation of mixed sigma/x braid words in the 3- and 4-strand
//! quotients.
//!
//! A subgroup is presented by six permutations, the images of the standard
//! pure-braid generators x12, x23, x13, x14, x24, x34 under a homomorphism
//! `psi` to a symmetric group; the subgroup itself is `ker psi`. From one
//! spec we build:
//!
//! * `Q4`, the image of `psi` (order = the index of the kernel);
//! * the 5-slot tuples `t3(g) = (psi phi_123(g), psi phi_12,3,4(g),
//!   psi phi_1,23,4(g), psi phi_1,2,34(g), psi phi_234(g))` for
//!   g in {x12, x23, x13}, which generate `Q3`;
//! * `QF2`, the subgroup generated by the x12 and x23 tuples;
//! * the central element `c = x23 x12 x13` and `N_ord`, the least common
//!   multiple of the orders of the x12, x23 and c tuples.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use crate::error::Error;
use crate::fingroup::{FinGroup, Generator, DEFAULT_ELEMENT_CAP};
use crate::perm::{lcm, parse_cycles, Perm, PermTuple};
use crate::words::{Alphabet, Sym, Word};

/// The six pure-braid generators of the 4-strand group, in spec-file order.
pub const PB4_GENS: [Sym; 6] = [Sym::X12, Sym::X23, Sym::X13, Sym::X14, Sym::X24, Sym::X34];

/// A finite-index normal subgroup of the 4-strand braid group, presented as
/// the kernel of the homomorphism sending the six standard pure-braid
/// generators to the given permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub name: String,
    pub degree: usize,
    images: [Perm; 6],
}

/// One failed instance of the defining relations, as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub rs: (usize, usize),
    pub ij: (usize, usize),
    pub case: &'static str,
}

impl std::fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "pair {{({},{}),({},{})}} ({} case)",
            self.rs.0, self.rs.1, self.ij.0, self.ij.1, self.case
        )
    }
}

fn gen_sym(i: usize, j: usize) -> Sym {
    match (i, j) {
        (1, 2) => Sym::X12,
        (2, 3) => Sym::X23,
        (1, 3) => Sym::X13,
        (1, 4) => Sym::X14,
        (2, 4) => Sym::X24,
        (3, 4) => Sym::X34,
        _ => unreachable!("not a generator index pair: ({i},{j})"),
    }
}

impl SubgroupSpec {
    pub fn new(name: impl Into<String>, degree: usize, images: [Perm; 6]) -> Result<SubgroupSpec, Error> {
        let name = name.into();
        for p in &images {
            if p.degree() != degree {
                return Err(Error::BadSpec(format!(
                    "{name}: image degree {} does not match declared degree {degree}",
                    p.degree()
                )));
            }
        }
        Ok(SubgroupSpec { name, degree, images })
    }

    pub fn image(&self, sym: Sym) -> &Perm {
        let idx = PB4_GENS.iter().position(|&s| s == sym).expect("pure generator");
        &self.images[idx]
    }

    pub fn images(&self) -> &[Perm; 6] {
        &self.images
    }

    /// Checks every instance of the defining relations of the 4-strand pure
    /// braid group against the images. An empty list means the images define
    /// a homomorphism.
    pub fn validate(&self) -> Vec<RelationViolation> {
        let pairs: [(usize, usize); 6] = [(1, 2), (2, 3), (1, 3), (1, 4), (2, 4), (3, 4)];
        let mut violations = Vec::new();
        for &(r, s) in &pairs {
            for &(i, j) in &pairs {
                if (r, s) == (i, j) {
                    continue;
                }
                let x = |a, b| self.image(gen_sym(a, b)).clone();
                let conj = x(r, s).inverse().compose(&x(i, j)).compose(&x(r, s));
                let (expected, case) = if s < i || (i < r && s < j) {
                    (x(i, j), "commuting")
                } else if s == i {
                    (
                        x(r, j).compose(&x(i, j)).compose(&x(r, j).inverse()),
                        "adjacent",
                    )
                } else if r == i && i < s && s < j {
                    (
                        x(r, j)
                            .compose(&x(s, j))
                            .compose(&x(i, j))
                            .compose(&x(s, j).inverse())
                            .compose(&x(r, j).inverse()),
                        "shared lower index",
                    )
                } else if r < i && i < s && s < j {
                    let comm = x(r, j)
                        .compose(&x(s, j))
                        .compose(&x(r, j).inverse())
                        .compose(&x(s, j).inverse());
                    (comm.compose(&x(i, j)).compose(&comm.inverse()), "interleaved")
                } else {
                    continue;
                };
                if conj != expected {
                    violations.push(RelationViolation { rs: (r, s), ij: (i, j), case });
                }
            }
        }
        violations
    }

    /// Canonical file form: `name:`/`degree:` lines followed by the six
    /// generator lines in the fixed key order, cycles in canonical form.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name: {}\n", self.name));
        out.push_str(&format!("degree: {}\n", self.degree));
        for (idx, sym) in PB4_GENS.iter().enumerate() {
            out.push_str(&format!("{}: {}\n", sym.name(), self.images[idx]));
        }
        out
    }

    pub fn parse(text: &str) -> Result<SubgroupSpec, Error> {
        let mut name: Option<String> = None;
        let mut degree: Option<usize> = None;
        let mut images: HashMap<Sym, String> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::BadSpec(format!("line {}: expected `key: value`", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim().to_string();
            match key {
                "name" => name = Some(value),
                "degree" => {
                    degree = Some(value.parse().map_err(|_| {
                        Error::BadSpec(format!("line {}: bad degree {value:?}", lineno + 1))
                    })?)
                }
                _ => {
                    let sym = Sym::from_name(key).filter(|s| PB4_GENS.contains(s)).ok_or_else(
                        || Error::BadSpec(format!("line {}: unknown key {key:?}", lineno + 1)),
                    )?;
                    if images.insert(sym, value).is_some() {
                        return Err(Error::BadSpec(format!("duplicate key {key}")));
                    }
                }
            }
        }
        let name = name.ok_or_else(|| Error::BadSpec("missing name".into()))?;
        let degree = degree.ok_or_else(|| Error::BadSpec("missing degree".into()))?;
        let mut parsed: Vec<Perm> = Vec::with_capacity(6);
        for sym in PB4_GENS {
            let text = images
                .get(&sym)
                .ok_or_else(|| Error::BadSpec(format!("missing generator {}", sym.name())))?;
            parsed.push(parse_cycles(text, degree)?);
        }
        SubgroupSpec::new(name, degree, parsed.try_into().expect("six images"))
    }

    pub fn read_file(path: &Path) -> Result<SubgroupSpec, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::BadSpec(format!("{}: {e}", path.display())))?;
        SubgroupSpec::parse(&text)
    }

    /// The q-cycle spec: every generator maps to `(1,2,...,q)`.
    pub fn cyclic(q: usize) -> Result<SubgroupSpec, Error> {
        if q < 1 {
            return Err(Error::BadSpec("cyclic spec needs q >= 1".into()));
        }
        let images0: Vec<usize> = (0..q).map(|i| (i + 1) % q).collect();
        let cycle = Perm::from_images0(&images0)?;
        SubgroupSpec::new(format!("ab{q}"), q, std::array::from_fn(|_| cycle.clone()))
    }

    /// The kernel of the degree-9 homomorphism with `|Q4| = 216`; the
    /// running small example of the whole pipeline.
    pub fn philadelphia() -> SubgroupSpec {
        let p = |t| parse_cycles(t, 9).expect("philadelphia images");
        SubgroupSpec::new(
            "philadelphia",
            9,
            [
                p("(1,3,2)(4,6,5)"),
                p("(1,4,9)(2,7,6)"),
                p("(1,7,5)(3,6,9)"),
                p("(2,6,7)(3,8,5)"),
                p("(1,8,6)(3,4,7)"),
                p("(1,2,3)(7,9,8)"),
            ],
        )
        .expect("philadelphia spec")
    }

    /// The kernel of the degree-18 homomorphism with `|Q4| = 762048`; the
    /// large example. Note that the x23 and x14 images coincide, as do the
    /// x12 and x34 images.
    pub fn mighty_dandy() -> SubgroupSpec {
        let p = |t| parse_cycles(t, 18).expect("mighty dandy images");
        SubgroupSpec::new(
            "mighty_dandy",
            18,
            [
                p("(1,3,5,7,9,2,4,6,8)(10,12,14,16,18,11,13,15,17)"),
                p("(1,3,7,8,2,4,9,6,5)(10,15,17,11,12,16,18,14,13)"),
                p("(1,3,8,5,4,9,2,6,7)(10,11,15,17,13,12,18,14,16)"),
                p("(1,3,7,8,2,4,9,6,5)(10,15,17,11,12,16,18,14,13)"),
                p("(1,7,6,2,4,8,9,3,5)(10,15,14,11,16,18,12,13,17)"),
                p("(1,3,5,7,9,2,4,6,8)(10,12,14,16,18,11,13,15,17)"),
            ],
        )
        .expect("mighty dandy spec")
    }
}

/// The nine cosimplicial homomorphisms, named by how the strands are
/// grouped (`12_3_4` doubles the first strand, and so on).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phi {
    P123,
    P12_3_4,
    P1_23_4,
    P1_2_34,
    P234,
    P12,
    P23,
    P12_3,
    P1_23,
}

impl Phi {
    /// The five maps from the 3-strand group, in the slot order used by the
    /// quotient tuples.
    pub const T3_SLOTS: [Phi; 5] = [Phi::P123, Phi::P12_3_4, Phi::P1_23_4, Phi::P1_2_34, Phi::P234];

    pub fn name(self) -> &'static str {
        match self {
            Phi::P123 => "123",
            Phi::P12_3_4 => "12_3_4",
            Phi::P1_23_4 => "1_23_4",
            Phi::P1_2_34 => "1_2_34",
            Phi::P234 => "234",
            Phi::P12 => "12",
            Phi::P23 => "23",
            Phi::P12_3 => "12_3",
            Phi::P1_23 => "1_23",
        }
    }

    pub fn from_name(s: &str) -> Option<Phi> {
        Some(match s {
            "123" => Phi::P123,
            "12_3_4" => Phi::P12_3_4,
            "1_23_4" => Phi::P1_23_4,
            "1_2_34" => Phi::P1_2_34,
            "234" => Phi::P234,
            "12" => Phi::P12,
            "23" => Phi::P23,
            "12_3" => Phi::P12_3,
            "1_23" => Phi::P1_23,
            _ => return None,
        })
    }

    fn is_from_pb3(self) -> bool {
        matches!(self, Phi::P123 | Phi::P12_3_4 | Phi::P1_23_4 | Phi::P1_2_34 | Phi::P234)
    }

    /// Image of a domain generator, as a word in the range alphabet.
    pub fn image_of(self, sym: Sym) -> Option<Word> {
        let w = |text: &str| crate::words::parse_word(text).expect("phi table entry");
        Some(match (self, sym) {
            (Phi::P123, Sym::X12) => w("x12"),
            (Phi::P123, Sym::X23) => w("x23"),
            (Phi::P123, Sym::X13) => w("x13"),
            (Phi::P234, Sym::X12) => w("x23"),
            (Phi::P234, Sym::X23) => w("x34"),
            (Phi::P234, Sym::X13) => w("x24"),
            (Phi::P12_3_4, Sym::X12) => w("x13 x23"),
            (Phi::P12_3_4, Sym::X23) => w("x34"),
            (Phi::P12_3_4, Sym::X13) => w("x14 x24"),
            (Phi::P1_23_4, Sym::X12) => w("x12 x13"),
            (Phi::P1_23_4, Sym::X23) => w("x24 x34"),
            (Phi::P1_23_4, Sym::X13) => w("x14"),
            (Phi::P1_2_34, Sym::X12) => w("x12"),
            (Phi::P1_2_34, Sym::X23) => w("x23 x24"),
            (Phi::P1_2_34, Sym::X13) => w("x13 x14"),
            (Phi::P12, Sym::X12) => w("x12"),
            (Phi::P23, Sym::X12) => w("x23"),
            (Phi::P12_3, Sym::X12) => w("x13 x23"),
            (Phi::P1_23, Sym::X12) => w("x12 x13"),
            _ => return None,
        })
    }
}

/// Applies one of the nine homomorphisms to a word over its domain
/// alphabet. For the maps out of the 3-strand group the central letter `c`
/// is expanded through `c = x23 x12 x13` first.
pub fn phi_substitute(phi: Phi, w: &Word) -> Result<Word, Error> {
    let expanded = if phi.is_from_pb3() {
        w.check_alphabet(Alphabet::Pb3)?;
        w.substitute(|sym| {
            if sym == Sym::C {
                Some(crate::words::parse_word("x23 x12 x13").expect("c expansion"))
            } else {
                Some(Word::gen(sym))
            }
        })?
    } else {
        for &(sym, _) in w.letters() {
            if sym != Sym::X12 {
                return Err(Error::AlphabetMismatch {
                    symbol: sym.name().to_string(),
                    alphabet: "PB2".to_string(),
                });
            }
        }
        w.clone()
    };
    expanded.substitute(|sym| phi.image_of(sym))
}

// ---------------------------------------------------------------------------
// sigma-conjugation tables
//
// Entries give sigma_k^-1 x sigma_k (positive) and sigma_k x sigma_k^-1
// (negative) as words in the pure generators; derived from
// x_ij = sigma_{j-1}..sigma_{i+1} sigma_i^2 sigma_{i+1}^-1..sigma_{j-1}^-1
// and the braid relations, and machine-verified both against the faithful
// free-group action and inside every catalog quotient.
// ---------------------------------------------------------------------------

/// `sigma_k^-1 sym sigma_k` in the 3-strand group (alphabet x12, x23, x13, c).
pub fn conj_pos_b3(k: usize, sym: Sym) -> Word {
    let w = |t: &str| crate::words::parse_word(t).expect("conj table");
    match (k, sym) {
        (1, Sym::X12) => w("x12"),
        (1, Sym::X23) => w("x13"),
        (1, Sym::X13) => w("x12^-1 x13^-1 c"),
        (2, Sym::X12) => w("x23^-1 x12^-1 c"),
        (2, Sym::X23) => w("x23"),
        (2, Sym::X13) => w("x12"),
        (_, Sym::C) => w("c"),
        _ => unreachable!("no such table entry"),
    }
}

/// `sigma_k sym sigma_k^-1` in the 3-strand group.
pub fn conj_neg_b3(k: usize, sym: Sym) -> Word {
    let w = |t: &str| crate::words::parse_word(t).expect("conj table");
    match (k, sym) {
        (1, Sym::X12) => w("x12"),
        (1, Sym::X23) => w("x23^-1 x12^-1 c"),
        (1, Sym::X13) => w("x23"),
        (2, Sym::X12) => w("x13"),
        (2, Sym::X23) => w("x23"),
        (2, Sym::X13) => w("x13^-1 x23^-1 c"),
        (_, Sym::C) => w("c"),
        _ => unreachable!("no such table entry"),
    }
}

/// `sigma_k^-1 sym sigma_k` in the 4-strand group (six x-generators).
pub fn conj_pos_b4(k: usize, sym: Sym) -> Word {
    let w = |t: &str| crate::words::parse_word(t).expect("conj table");
    match (k, sym) {
        (1, Sym::X12) => w("x12"),
        (1, Sym::X13) => w("x12^-1 x23 x12"),
        (1, Sym::X14) => w("x12^-1 x24 x12"),
        (1, Sym::X23) => w("x13"),
        (1, Sym::X24) => w("x14"),
        (1, Sym::X34) => w("x34"),
        (2, Sym::X12) => w("x23^-1 x13 x23"),
        (2, Sym::X13) => w("x12"),
        (2, Sym::X14) => w("x14"),
        (2, Sym::X23) => w("x23"),
        (2, Sym::X24) => w("x23^-1 x34 x23"),
        (2, Sym::X34) => w("x24"),
        (3, Sym::X12) => w("x12"),
        (3, Sym::X13) => w("x34^-1 x14 x34"),
        (3, Sym::X23) => w("x34^-1 x24 x34"),
        (3, Sym::X14) => w("x13"),
        (3, Sym::X24) => w("x23"),
        (3, Sym::X34) => w("x34"),
        _ => unreachable!("no such table entry"),
    }
}

/// `sigma_k sym sigma_k^-1` in the 4-strand group.
pub fn conj_neg_b4(k: usize, sym: Sym) -> Word {
    let w = |t: &str| crate::words::parse_word(t).expect("conj table");
    match (k, sym) {
        (1, Sym::X12) => w("x12"),
        (1, Sym::X13) => w("x23"),
        (1, Sym::X14) => w("x24"),
        (1, Sym::X23) => w("x12 x13 x12^-1"),
        (1, Sym::X24) => w("x12 x14 x12^-1"),
        (1, Sym::X34) => w("x34"),
        (2, Sym::X12) => w("x13"),
        (2, Sym::X13) => w("x23 x12 x23^-1"),
        (2, Sym::X14) => w("x14"),
        (2, Sym::X23) => w("x23"),
        (2, Sym::X24) => w("x34"),
        (2, Sym::X34) => w("x23 x24 x23^-1"),
        (3, Sym::X12) => w("x12"),
        (3, Sym::X13) => w("x14"),
        (3, Sym::X23) => w("x24"),
        (3, Sym::X14) => w("x34 x13 x34^-1"),
        (3, Sym::X24) => w("x34 x23 x34^-1"),
        (3, Sym::X34) => w("x34"),
        _ => unreachable!("no such table entry"),
    }
}

/// `x_ij` as a word in the sigma generators:
/// `sigma_{j-1} .. sigma_{i+1} sigma_i^2 sigma_{i+1}^-1 .. sigma_{j-1}^-1`.
pub fn xij_sigma_word(i: usize, j: usize) -> Word {
    assert!(1 <= i && i < j && j <= 4);
    let sigma = [Sym::S1, Sym::S2, Sym::S3];
    let mut w = Word::identity();
    for k in ((i + 1)..j).rev() {
        w.push(sigma[k - 1], 1);
    }
    w.push(sigma[i - 1], 2);
    for k in (i + 1)..j {
        w.push(sigma[k - 1], -1);
    }
    w
}

fn inversions(theta: &Perm) -> usize {
    let n = theta.degree();
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if theta.apply(i) > theta.apply(j) {
                count += 1;
            }
        }
    }
    count
}

fn transposition(n: usize, k: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.swap(k - 1, k);
    Perm::from_images0(&images).expect("transposition")
}

/// A fixed reduced expression `theta = tau_{a1} o tau_{a2} o ... o tau_{al}`
/// (adjacent transpositions, 1-based indices). Any reduced choice lifts to
/// the same positive braid, so only determinism matters here.
fn reduced_word(theta: &Perm) -> Vec<usize> {
    let n = theta.degree();
    let mut theta = theta.clone();
    let mut out = Vec::new();
    while !theta.is_identity() {
        let len = inversions(&theta);
        let k = (1..n)
            .find(|&k| inversions(&transposition(n, k).compose(&theta)) < len)
            .expect("a non-identity permutation has a descent");
        out.push(k);
        theta = transposition(n, k).compose(&theta);
    }
    out
}

/// An element of the 3- or 4-strand braid group modulo the induced normal
/// subgroup: the underlying permutation of the strands plus the pure part
/// relative to the canonical positive lift of that permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidCoset {
    pub theta: Perm,
    pub pure: PermTuple,
}

impl BraidCoset {
    pub fn is_pure(&self) -> bool {
        self.theta.is_identity()
    }
}

/// Everything derived from one validated spec: the finite quotients, the
/// generator tuples and the braid-word evaluators. Frozen after build; all
/// evaluation methods are pure.
pub struct Quotients {
    spec: SubgroupSpec,
    x12: PermTuple,
    x23: PermTuple,
    x13: PermTuple,
    c: PermTuple,
    n_ord: u64,
    q4: FinGroup,
    q3_order: u64,
    qf2_order: u64,
    cap: usize,
    cache_dir: Option<PathBuf>,
    qf2: OnceLock<FinGroup>,
    qf2_derived: OnceLock<FinGroup>,
    qf2_derived_table: OnceLock<FinGroup>,
}

/// Options for [`build_quotients`].
#[derive(Debug, Clone)]
pub struct QuotientOptions {
    /// Cap on enumerated elements (default [`DEFAULT_ELEMENT_CAP`]).
    pub cap: usize,
    /// Directory for the binary enumeration cache, if any.
    pub cache_dir: Option<PathBuf>,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        QuotientOptions { cap: DEFAULT_ELEMENT_CAP, cache_dir: None }
    }
}

/// Validates the spec and builds the quotient data. The x12/x23/x13 tuples,
/// the central element, `N_ord` and the chain-backed group orders are
/// computed eagerly; enumerations are lazy.
pub fn build_quotients(spec: SubgroupSpec, options: QuotientOptions) -> Result<Quotients, Error> {
    let violations = spec.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidSpec(violations));
    }
    let eval4 = |w: &Word| -> Perm {
        let mut acc = Perm::identity(spec.degree);
        for &(sym, exp) in w.letters() {
            acc = acc.compose(&spec.image(sym).pow(exp));
        }
        acc
    };
    let t3 = |sym: Sym| -> PermTuple {
        let slots: Vec<Perm> = Phi::T3_SLOTS
            .iter()
            .map(|&phi| eval4(&phi.image_of(sym).expect("pb3 generator")))
            .collect();
        PermTuple::new(slots)
    };
    let x12 = t3(Sym::X12);
    let x23 = t3(Sym::X23);
    let x13 = t3(Sym::X13);
    let c = x23.compose(&x12).compose(&x13);

    // the three equivalent characterizations of N_ord must agree
    let n_ord = [c.order(), x12.compose(&x13).order(), x13.compose(&x23).order()]
        .map(|o| lcm(lcm(x12.order(), x23.order()), o));
    assert!(
        n_ord[0] == n_ord[1] && n_ord[1] == n_ord[2],
        "the three lcm characterizations of N_ord disagree: {n_ord:?}"
    );
    for g in [&x12, &x23, &x13] {
        assert_eq!(c.compose(g), g.compose(&c), "central element fails to commute");
    }

    let q4 = FinGroup::via_chain(
        PB4_GENS
            .iter()
            .map(|&s| Generator::of_sym(s, PermTuple::single(spec.image(s).clone())))
            .collect(),
    );
    let q3_order = crate::fingroup::group_order(&[x12.clone(), x23.clone(), x13.clone()]);
    let qf2_order = crate::fingroup::group_order(&[x12.clone(), x23.clone()]);

    Ok(Quotients {
        spec,
        x12,
        x23,
        x13,
        c,
        n_ord: n_ord[0],
        q4,
        q3_order,
        qf2_order,
        cap: options.cap,
        cache_dir: options.cache_dir,
        qf2: OnceLock::new(),
        qf2_derived: OnceLock::new(),
        qf2_derived_table: OnceLock::new(),
    })
}

impl Quotients {
    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    /// Index of the subgroup: the order of the image of `psi`.
    pub fn q4_order(&self) -> u64 {
        self.q4.order()
    }

    pub fn q4(&self) -> &FinGroup {
        &self.q4
    }

    pub fn q3_order(&self) -> u64 {
        self.q3_order
    }

    pub fn qf2_order(&self) -> u64 {
        self.qf2_order
    }

    pub fn n_ord(&self) -> u64 {
        self.n_ord
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn t3_x12(&self) -> &PermTuple {
        &self.x12
    }

    pub fn t3_x23(&self) -> &PermTuple {
        &self.x23
    }

    pub fn t3_x13(&self) -> &PermTuple {
        &self.x13
    }

    pub fn c_image(&self) -> &PermTuple {
        &self.c
    }

    fn t3_image(&self, sym: Sym) -> Option<&PermTuple> {
        match sym {
            Sym::X12 => Some(&self.x12),
            Sym::X23 => Some(&self.x23),
            Sym::X13 => Some(&self.x13),
            Sym::C => Some(&self.c),
            _ => None,
        }
    }

    /// Image of a pure word over {x12, x23, x13, c} in `Q3`.
    pub fn eval_pure3(&self, w: &Word) -> Result<PermTuple, Error> {
        w.check_alphabet(Alphabet::Pb3)?;
        let mut acc = self.x12.identity_like();
        for &(sym, exp) in w.letters() {
            acc = acc.compose(&self.t3_image(sym).expect("pb3 alphabet").pow(exp));
        }
        Ok(acc)
    }

    /// Image of a pure word over the six x-generators under `psi`.
    pub fn eval_pure4(&self, w: &Word) -> Result<Perm, Error> {
        w.check_alphabet(Alphabet::Pb4)?;
        let mut acc = Perm::identity(self.spec.degree);
        for &(sym, exp) in w.letters() {
            acc = acc.compose(&self.spec.image(sym).pow(exp));
        }
        Ok(acc)
    }

    /// Evaluates a mixed sigma/x word in the 3- or 4-strand quotient.
    ///
    /// The state tracks the underlying permutation `theta` and the pure part
    /// relative to the canonical positive lift of `theta`; the word is
    /// consumed right to left so that pure letters are conjugated through
    /// the sigma-suffix at the element level (linear in word length).
    pub fn eval_braid(&self, strands: usize, w: &Word) -> Result<BraidCoset, Error> {
        let (alphabet, slots) = match strands {
            3 => (Alphabet::Braid3, 5),
            4 => (Alphabet::Braid4, 1),
            _ => {
                return Err(Error::NotApplicable(format!(
                    "braid evaluation is defined for 3 or 4 strands, not {strands}"
                )))
            }
        };
        w.check_alphabet(alphabet)?;
        let base = |sym: Sym| -> PermTuple {
            if slots == 5 {
                self.t3_image(sym).expect("pure generator").clone()
            } else {
                PermTuple::single(self.spec.image(sym).clone())
            }
        };
        let identity = if slots == 5 {
            self.x12.identity_like()
        } else {
            PermTuple::single(Perm::identity(self.spec.degree))
        };
        // conjugate of a generator by the positive lift of theta, memoized
        let mut conj_cache: HashMap<(Perm, Sym), PermTuple> = HashMap::new();
        let mut conj_elt = |theta: &Perm, sym: Sym| -> PermTuple {
            if theta.is_identity() {
                return base(sym);
            }
            if let Some(hit) = conj_cache.get(&(theta.clone(), sym)) {
                return hit.clone();
            }
            let mut word = Word::gen(sym);
            for k in reduced_word(theta) {
                word = word
                    .substitute(|s| {
                        Some(if strands == 3 { conj_pos_b3(k, s) } else { conj_pos_b4(k, s) })
                    })
                    .expect("conjugation tables cover the pure alphabet");
            }
            let mut acc = identity.clone();
            for &(s, e) in word.letters() {
                acc = acc.compose(&base(s).pow(e));
            }
            conj_cache.insert((theta.clone(), sym), acc.clone());
            acc
        };

        let cross = [Sym::X12, Sym::X23, Sym::X34]; // sigma_k^2 = x_{k,k+1}
        let mut theta = Perm::identity(strands);
        let mut acc = identity.clone();
        for &(sym, exp) in w.letters().iter().rev() {
            match sym {
                Sym::S1 | Sym::S2 | Sym::S3 => {
                    let k = match sym {
                        Sym::S1 => 1,
                        Sym::S2 => 2,
                        _ => 3,
                    };
                    let positive = exp > 0;
                    for _ in 0..exp.unsigned_abs() {
                        let next = transposition(strands, k).compose(&theta);
                        let ascent = inversions(&next) > inversions(&theta);
                        match (positive, ascent) {
                            (true, true) | (false, false) => {}
                            (true, false) => {
                                acc = conj_elt(&next, cross[k - 1]).compose(&acc);
                            }
                            (false, true) => {
                                acc = conj_elt(&next, cross[k - 1]).inverse().compose(&acc);
                            }
                        }
                        theta = next;
                    }
                }
                _ => {
                    acc = conj_elt(&theta, sym).pow(exp).compose(&acc);
                }
            }
        }
        Ok(BraidCoset { theta, pure: acc })
    }

    /// The enumerated `QF2` with breadth-first witnesses over x, y.
    pub fn qf2(&self) -> Result<&FinGroup, Error> {
        if let Some(g) = self.qf2.get() {
            return Ok(g);
        }
        let gens = vec![
            Generator::of_sym(Sym::X12, self.x12.clone()),
            Generator::of_sym(Sym::X23, self.x23.clone()),
        ];
        let built = self.load_or_enumerate(gens, "qf2")?;
        Ok(self.qf2.get_or_init(|| built))
    }

    /// The derived subgroup of `QF2`, chain-backed, with commutator-word
    /// generator expressions.
    pub fn qf2_derived(&self) -> &FinGroup {
        self.qf2_derived.get_or_init(|| {
            let parent = FinGroup::via_chain(vec![
                Generator::of_sym(Sym::X12, self.x12.clone()),
                Generator::of_sym(Sym::X23, self.x23.clone()),
            ]);
            parent.derived_subgroup()
        })
    }

    /// The enumerated derived subgroup of `QF2`.
    pub fn qf2_derived_table(&self) -> Result<&FinGroup, Error> {
        if let Some(g) = self.qf2_derived_table.get() {
            return Ok(g);
        }
        let gens = self.qf2_derived().gens().to_vec();
        let built = self.load_or_enumerate(gens, "derived")?;
        Ok(self.qf2_derived_table.get_or_init(|| built))
    }

    fn load_or_enumerate(&self, gens: Vec<Generator>, tag: &str) -> Result<FinGroup, Error> {
        if let Some(dir) = &self.cache_dir {
            let probe = FinGroup::via_chain(gens.clone());
            let path = dir.join(format!("{}-{}.gtsf", tag, probe.cache_key()));
            if let Ok(Some(cached)) = FinGroup::read_cache(&path, gens.clone()) {
                return Ok(cached);
            }
            let built = FinGroup::enumerate(gens, true, self.cap)?;
            let _ = std::fs::create_dir_all(dir);
            let _ = built.write_cache(&path);
            return Ok(built);
        }
        FinGroup::enumerate(gens, true, self.cap)
    }
}
