//! GT-shadows over one target spec: the hexagon/pentagon predicates,
//! classification, enumeration, composition, source computation and the
//! virtual cyclotomic character.
//!
//! A candidate is a pair `(m, f)` with `m` a residue modulo `N_ord` and `f`
//! a coset of the rank-2 free subgroup quotient `QF2`. The pentagon relation
//! depends only on `f` and, through the five-slot structure of the quotient
//! tuples, reduces to a product identity on the slots of the evaluated
//! element. The two hexagon relations reduce to element identities built
//! from four auxiliary homomorphic images of `f` which are maintained
//! incrementally along the breadth-first element table, so the scan over
//! all candidates costs a handful of tuple multiplications each.

use std::collections::HashMap;

use crate::braidq::{phi_substitute, xij_sigma_word, Phi, Quotients, SubgroupSpec};
use crate::error::Error;
use crate::fingroup::{subgroup_order, FinGroup};
use crate::perm::{gcd, Perm, PermTuple};
use crate::words::{parse_word, Alphabet, Sym, Word};

/// Which enumeration the coset id refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CosetDomain {
    /// Breadth-first id in the full `QF2` table.
    Full,
    /// Breadth-first id in the enumerated derived subgroup of `QF2`.
    Derived,
}

/// Classification flags of a candidate pair, kept consistent with the
/// predicates at all times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    /// Both hexagons and the pentagon hold.
    pub is_pair: bool,
    /// `2m+1` is a unit modulo `N_ord`.
    pub friendly: bool,
    /// Pair, friendly, and the induced 3-strand map is onto.
    pub is_shadow: bool,
    /// Shadow with an `f`-representative in the derived subgroup whose
    /// induced rank-2 map is onto.
    pub charming: bool,
}

/// A classified candidate pair over one target spec. `(m, f_coset_id)`
/// determines the shadow within its coset domain; `f_word` is one witness.
#[derive(Debug, Clone)]
pub struct GtShadow {
    pub m: u64,
    pub f_word: Word,
    pub f_coset_id: u32,
    pub f_elt: PermTuple,
    pub domain: CosetDomain,
    pub flags: Flags,
}

impl GtShadow {
    /// Serialization line: `m=<int> f=<word>` with x, y for x12, x23.
    pub fn display_line(&self) -> String {
        format!("m={} f={}", self.m, self.f_word.display_f2())
    }

    pub fn key(&self) -> (u64, u32) {
        (self.m, self.f_coset_id)
    }
}

/// The four auxiliary homomorphic images of `f` used by the hexagon
/// element identities (`u` abbreviates `x23^-1 x12^-1 c`):
/// `f(u, x12)`, `f(u, x23)`, `f(x13^-1 x12^-1 c, x13)`, `f(x12, x13)`.
fn eta_words() -> [[(Sym, Word); 2]; 4] {
    let w = |t: &str| parse_word(t).expect("eta table");
    [
        [(Sym::X12, w("x23^-1 x12^-1 c")), (Sym::X23, w("x12"))],
        [(Sym::X12, w("x23^-1 x12^-1 c")), (Sym::X23, w("x23"))],
        [(Sym::X12, w("x13^-1 x12^-1 c")), (Sym::X23, w("x13"))],
        [(Sym::X12, w("x12")), (Sym::X23, w("x13"))],
    ]
}

fn eta_substitute(i: usize, f: &Word) -> Word {
    let tables = eta_words();
    f.substitute(|sym| {
        tables[i]
            .iter()
            .find(|(s, _)| *s == sym)
            .map(|(_, w)| w.clone())
    })
    .expect("f is a rank-2 word")
}

/// Per-residue precomputed powers for the hexagon identities.
struct MPowers {
    m: u64,
    x12_m: PermTuple,
    x23_m: PermTuple,
    x13_m: PermTuple,
    u_m: PermTuple,
    c_neg_m: PermTuple,
    x12_2m1: PermTuple,
    x23_2m1: PermTuple,
    x13_2m1: PermTuple,
}

impl MPowers {
    fn new(q: &Quotients, m: u64) -> MPowers {
        let u = q
            .t3_x23()
            .inverse()
            .compose(&q.t3_x12().inverse())
            .compose(q.c_image());
        let m_i = m as i64;
        MPowers {
            m,
            x12_m: q.t3_x12().pow(m_i),
            x23_m: q.t3_x23().pow(m_i),
            x13_m: q.t3_x13().pow(m_i),
            u_m: u.pow(m_i),
            c_neg_m: q.c_image().pow(-m_i),
            x12_2m1: q.t3_x12().pow(2 * m_i + 1),
            x23_2m1: q.t3_x23().pow(2 * m_i + 1),
            x13_2m1: q.t3_x13().pow(2 * m_i + 1),
        }
    }
}

/// Hexagon and shadow data for one `f`-coset element.
struct CosetImages {
    e: PermTuple,
    e_inv: PermTuple,
    f1: PermTuple,
    f2_inv: PermTuple,
    f3_inv: PermTuple,
    f4: PermTuple,
}

impl CosetImages {
    fn from_parts(
        e: PermTuple,
        f1: PermTuple,
        f2: &PermTuple,
        f3: &PermTuple,
        f4: PermTuple,
    ) -> CosetImages {
        CosetImages {
            e_inv: e.inverse(),
            e,
            f1,
            f2_inv: f2.inverse(),
            f3_inv: f3.inverse(),
            f4,
        }
    }

    fn from_word(q: &Quotients, f: &Word) -> Result<CosetImages, Error> {
        f.check_alphabet(Alphabet::F2)?;
        let e = q.eval_pure3(f)?;
        let images: Vec<PermTuple> = (0..4)
            .map(|i| q.eval_pure3(&eta_substitute(i, f)))
            .collect::<Result<_, _>>()?;
        Ok(CosetImages::from_parts(
            e,
            images[0].clone(),
            &images[1],
            &images[2],
            images[3].clone(),
        ))
    }

    /// First hexagon: `x12^m f1 u^m f2^-1 x23^m e c^-m = 1`.
    fn hexagon1(&self, p: &MPowers) -> bool {
        p.x12_m
            .compose(&self.f1)
            .compose(&p.u_m)
            .compose(&self.f2_inv)
            .compose(&p.x23_m)
            .compose(&self.e)
            .compose(&p.c_neg_m)
            .is_identity()
    }

    /// Second hexagon: `e^-1 x23^m f3^-1 x13^m f4 x12^m c^-m = 1`.
    fn hexagon11(&self, p: &MPowers) -> bool {
        self.e_inv
            .compose(&p.x23_m)
            .compose(&self.f3_inv)
            .compose(&p.x13_m)
            .compose(&self.f4)
            .compose(&p.x12_m)
            .compose(&p.c_neg_m)
            .is_identity()
    }

    /// Images of x12, x23, x13 under the induced 3-strand endomorphism.
    fn t3_images(&self, p: &MPowers) -> [PermTuple; 3] {
        let tx12 = p.x12_2m1.clone();
        let tx23 = self.e_inv.compose(&p.x23_2m1).compose(&self.e);
        let tx13 = p
            .x12_m
            .inverse()
            .compose(&self.f4.inverse())
            .compose(&p.x13_2m1)
            .compose(&self.f4)
            .compose(&p.x12_m);
        [tx12, tx23, tx13]
    }
}

/// Pentagon relation for an already-evaluated coset element: with slots
/// ordered (123, 12_3_4, 1_23_4, 1_2_34, 234) the relation reads
/// `s4 s2 s0 = s3 s1` in `Q4`.
pub fn pentagon_holds_elt(e: &PermTuple) -> bool {
    let lhs = e.slot(4).compose(e.slot(2)).compose(e.slot(0));
    let rhs = e.slot(3).compose(e.slot(1));
    lhs == rhs
}

/// Pentagon relation checked through the cosimplicial substitutions and
/// the 4-strand evaluator; the slot identity above is the fast route and
/// the two are asserted equal in the test suite.
pub fn pentagon_holds(q: &Quotients, f: &Word) -> Result<bool, Error> {
    f.check_alphabet(Alphabet::F2)?;
    let img = |phi: Phi| -> Result<Perm, Error> { q.eval_pure4(&phi_substitute(phi, f)?) };
    let lhs = img(Phi::P234)?.compose(&img(Phi::P1_23_4)?).compose(&img(Phi::P123)?);
    let rhs = img(Phi::P1_2_34)?.compose(&img(Phi::P12_3_4)?);
    Ok(lhs == rhs)
}

/// Both hexagon relations, checked by normalizing `lhs^-1 rhs` through the
/// 3-strand braid evaluator (the underlying permutation must vanish, then
/// the pure part must be the identity).
pub fn hexagons_hold(q: &Quotients, m: u64, f: &Word) -> Result<bool, Error> {
    f.check_alphabet(Alphabet::F2)?;
    let m = m as i64;
    let w = |t: &str| parse_word(t).expect("hexagon word");
    let f_inv = f.inverse();
    // s1 x12^m f^-1 s2 x23^m f  vs  f^-1 s1 s2 (x13 x23)^m
    let lhs1 = w("s1")
        .concat(&Word::letter(Sym::X12, m))
        .concat(&f_inv)
        .concat(&w("s2"))
        .concat(&Word::letter(Sym::X23, m))
        .concat(f);
    let rhs1 = f_inv.concat(&w("s1 s2")).concat(&w("x13 x23").pow(m));
    // f^-1 s2 x23^m f s1 x12^m  vs  s2 s1 (x12 x13)^m f
    let lhs2 = f_inv
        .concat(&w("s2"))
        .concat(&Word::letter(Sym::X23, m))
        .concat(f)
        .concat(&w("s1"))
        .concat(&Word::letter(Sym::X12, m));
    let rhs2 = w("s2 s1").concat(&w("x12 x13").pow(m)).concat(f);
    for (lhs, rhs) in [(lhs1, rhs1), (lhs2, rhs2)] {
        let normalized = q.eval_braid(3, &lhs.inverse().concat(&rhs))?;
        assert!(
            normalized.is_pure(),
            "hexagon sides have mismatched underlying permutations"
        );
        if !normalized.pure.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Images of x12, x23, x13 and c under the endomorphism induced by
/// `(m, f)`: x12 and c map to their `2m+1`-th powers, x23 to the
/// `f`-conjugated power, and x13 through its sigma-conjugated word.
pub fn t3_images(q: &Quotients, m: u64, f: &Word) -> Result<[PermTuple; 4], Error> {
    f.check_alphabet(Alphabet::F2)?;
    let m = m as i64;
    let f_elt = q.eval_pure3(f)?;
    let tx12 = q.t3_x12().pow(2 * m + 1);
    let tx23 = f_elt.inverse().compose(&q.t3_x23().pow(2 * m + 1)).compose(&f_elt);
    // x13 = s1^-1 x23 s1, so T(x13) = x12^-m s1^-1 f^-1 x23^{2m+1} f s1 x12^m
    let w13 = Word::letter(Sym::X12, -m)
        .concat(&Word::letter(Sym::S1, -1))
        .concat(&f.inverse())
        .concat(&Word::letter(Sym::X23, 2 * m + 1))
        .concat(f)
        .concat(&Word::letter(Sym::S1, 1))
        .concat(&Word::letter(Sym::X12, m));
    let coset = q.eval_braid(3, &w13)?;
    assert!(coset.is_pure(), "conjugated x13 image must be pure");
    let tc = q.c_image().pow(2 * m + 1);
    Ok([tx12, tx23, coset.pure, tc])
}

/// Images of the six 4-strand pure generators under the endomorphism
/// induced by `(m, f)`: each `x_ij` sigma-word is rewritten through the
/// generator images `s1 -> s1 x12^m`, `s2 -> f^-1 s2 x23^m f`,
/// `s3 -> phi_12_3_4(f)^-1 s3 x34^m phi_12_3_4(f)` and evaluated in the
/// 4-strand quotient.
pub fn t4_images(q: &Quotients, m: u64, f: &Word) -> Result<[Perm; 6], Error> {
    f.check_alphabet(Alphabet::F2)?;
    let m = m as i64;
    let t_s1 = Word::gen(Sym::S1).concat(&Word::letter(Sym::X12, m));
    let t_s2 = f
        .inverse()
        .concat(&Word::gen(Sym::S2))
        .concat(&Word::letter(Sym::X23, m))
        .concat(f);
    let f1234 = phi_substitute(Phi::P12_3_4, f)?;
    let t_s3 = f1234
        .inverse()
        .concat(&Word::gen(Sym::S3))
        .concat(&Word::letter(Sym::X34, m))
        .concat(&f1234);
    let assign = |sym: Sym| -> Option<Word> {
        Some(match sym {
            Sym::S1 => t_s1.clone(),
            Sym::S2 => t_s2.clone(),
            Sym::S3 => t_s3.clone(),
            _ => return None,
        })
    };
    let mut out: Vec<Perm> = Vec::with_capacity(6);
    for (i, j) in [(1, 2), (2, 3), (1, 3), (1, 4), (2, 4), (3, 4)] {
        let word = xij_sigma_word(i, j).substitute(assign)?;
        let coset = q.eval_braid(4, &word)?;
        assert!(coset.is_pure(), "generator image must be pure");
        out.push(coset.pure.slot(0).clone());
    }
    Ok(out.try_into().expect("six images"))
}

/// Full classification of an arbitrary `(m, f)` candidate.
pub fn classify(q: &Quotients, m: u64, f: &Word) -> Result<Flags, Error> {
    let images = CosetImages::from_word(q, f)?;
    let powers = MPowers::new(q, m % q.n_ord().max(1));
    Ok(classify_images(q, &images, &powers))
}

fn classify_images(q: &Quotients, images: &CosetImages, powers: &MPowers) -> Flags {
    let mut flags = Flags {
        friendly: gcd(2 * powers.m + 1, q.n_ord()) == 1,
        ..Flags::default()
    };
    flags.is_pair =
        pentagon_holds_elt(&images.e) && images.hexagon1(powers) && images.hexagon11(powers);
    if flags.is_pair && flags.friendly {
        let t3 = images.t3_images(powers);
        flags.is_shadow = subgroup_order(&t3) == q.q3_order();
        if flags.is_shadow {
            flags.charming = q.qf2_derived().contains(&images.e)
                && subgroup_order(&t3[..2]) == q.qf2_order();
        }
    }
    flags
}

/// Enumeration scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumMode {
    /// All `QF2` cosets crossed with all residues; rows are the shadows.
    Practical,
    /// Derived-subgroup cosets crossed with friendly residues; rows are the
    /// charming shadows.
    Charming,
}

/// Shared scan state: the element table plus the four auxiliary image
/// arrays, computed incrementally along the breadth-first provenance.
struct ScanTable<'a> {
    group: &'a FinGroup,
    aux: [Vec<PermTuple>; 4],
}

impl<'a> ScanTable<'a> {
    fn build(q: &Quotients, group: &'a FinGroup) -> ScanTable<'a> {
        let table = group.table().expect("scan needs an enumerated group");
        let mut aux: [Vec<PermTuple>; 4] = Default::default();
        for (i, store) in aux.iter_mut().enumerate() {
            // image of each multiplier under the i-th substitution
            let mult_images: Vec<PermTuple> = table.multiplier_map(|gen_idx, inverted, _| {
                let word = group.gens()[gen_idx]
                    .word
                    .clone()
                    .expect("scan generators carry words");
                let word = if inverted { word.inverse() } else { word };
                q.eval_pure3(&eta_substitute(i, &word)).expect("rank-2 image")
            });
            let mut values: Vec<PermTuple> = Vec::with_capacity(table.len());
            values.push(q.t3_x12().identity_like());
            for &(parent, mult) in &table.provenance()[1..] {
                values.push(values[parent as usize].compose(&mult_images[mult as usize]));
            }
            *store = values;
        }
        ScanTable { group, aux }
    }

    fn images(&self, id: u32) -> CosetImages {
        let e = self.group.table().expect("enumerated").element(id).clone();
        CosetImages::from_parts(
            e,
            self.aux[0][id as usize].clone(),
            &self.aux[1][id as usize],
            &self.aux[2][id as usize],
            self.aux[3][id as usize].clone(),
        )
    }
}

fn friendly_residues(n_ord: u64) -> Vec<u64> {
    let n = n_ord.max(1);
    (0..n).filter(|&m| gcd(2 * m + 1, n) == 1).collect()
}

fn run_jobs<T: Send>(
    jobs: usize,
    count: usize,
    op: impl Fn(std::ops::Range<usize>) -> Vec<T> + Sync,
) -> Vec<T> {
    let jobs = jobs.max(1);
    let chunk = count.div_ceil(jobs.max(1)).max(1);
    let ranges: Vec<std::ops::Range<usize>> = (0..count)
        .step_by(chunk)
        .map(|lo| lo..(lo + chunk).min(count))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| {
        use rayon::prelude::*;
        ranges.into_par_iter().map(&op).collect::<Vec<Vec<T>>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// Enumerates shadows with the given scope. Output is sorted by
/// `(m, f_coset_id)` and identical for any job count.
pub fn enumerate_shadows(
    q: &Quotients,
    mode: EnumMode,
    jobs: usize,
) -> Result<Vec<GtShadow>, Error> {
    let (group, domain) = match mode {
        EnumMode::Practical => (q.qf2()?, CosetDomain::Full),
        EnumMode::Charming => (q.qf2_derived_table()?, CosetDomain::Derived),
    };
    let scan = ScanTable::build(q, group);
    let powers: Vec<MPowers> = friendly_residues(q.n_ord())
        .into_iter()
        .map(|m| MPowers::new(q, m))
        .collect();
    let count = group.order() as usize;
    let mut rows = run_jobs(jobs, count, |range| {
        let mut out = Vec::new();
        for id in range {
            let id = id as u32;
            let images = scan.images(id);
            if !pentagon_holds_elt(&images.e) {
                continue;
            }
            for p in &powers {
                if !images.hexagon1(p) || !images.hexagon11(p) {
                    continue;
                }
                let t3 = images.t3_images(p);
                if subgroup_order(&t3) != q.q3_order() {
                    continue;
                }
                let charming = match domain {
                    CosetDomain::Derived => subgroup_order(&t3[..2]) == q.qf2_order(),
                    CosetDomain::Full => {
                        q.qf2_derived().contains(&images.e)
                            && subgroup_order(&t3[..2]) == q.qf2_order()
                    }
                };
                if mode == EnumMode::Charming && !charming {
                    continue;
                }
                out.push(GtShadow {
                    m: p.m,
                    f_word: group.witness_word(id),
                    f_coset_id: id,
                    f_elt: images.e.clone(),
                    domain,
                    flags: Flags { is_pair: true, friendly: true, is_shadow: true, charming },
                });
            }
        }
        out
    });
    rows.sort_by_key(GtShadow::key);
    Ok(rows)
}

/// Scan used by the Furusho reports: counts the domain elements satisfying
/// the pentagon relation and, of those, the ones extendable to a pair by
/// some friendly residue.
pub(crate) fn scan_pentagon_extendable(
    q: &Quotients,
    group: &FinGroup,
    jobs: usize,
) -> (u64, u64) {
    let scan = ScanTable::build(q, group);
    let powers: Vec<MPowers> = friendly_residues(q.n_ord())
        .into_iter()
        .map(|m| MPowers::new(q, m))
        .collect();
    let count = group.order() as usize;
    let rows = run_jobs(jobs, count, |range| {
        let mut pentagon = 0u64;
        let mut extendable = 0u64;
        for id in range {
            let images = scan.images(id as u32);
            if !pentagon_holds_elt(&images.e) {
                continue;
            }
            pentagon += 1;
            if powers.iter().any(|p| images.hexagon1(p) && images.hexagon11(p)) {
                extendable += 1;
            }
        }
        vec![(pentagon, extendable)]
    });
    rows.into_iter().fold((0, 0), |(a, b), (c, d)| (a + c, b + d))
}

/// The `f`-cosets of the full `QF2` satisfying the pentagon relation,
/// as `(coset id, witness)` rows sorted by id.
pub fn pentagon_cosets(q: &Quotients, jobs: usize) -> Result<Vec<(u32, Word)>, Error> {
    let group = q.qf2()?;
    let table = group.table().expect("enumerated");
    let count = table.len();
    let mut rows = run_jobs(jobs, count, |range| {
        let mut out = Vec::new();
        for id in range {
            if pentagon_holds_elt(table.element(id as u32)) {
                out.push((id as u32, group.witness_word(id as u32)));
            }
        }
        out
    });
    rows.sort_by_key(|&(id, _)| id);
    Ok(rows)
}

/// The identity shadow `(0, e)`.
pub fn identity_shadow(q: &Quotients) -> Result<GtShadow, Error> {
    let f = Word::identity();
    let flags = classify(q, 0, &f)?;
    let elt = q.eval_pure3(&f)?;
    let t = q.qf2_derived_table()?;
    let id = t
        .table()
        .expect("enumerated")
        .id_of(&elt)
        .expect("identity coset");
    Ok(GtShadow { m: 0, f_word: f, f_coset_id: id, f_elt: elt, domain: CosetDomain::Derived, flags })
}

/// The unit `(2m+1) mod N_ord` attached to a friendly shadow.
pub fn cyclotomic(q: &Quotients, sh: &GtShadow) -> Result<u64, Error> {
    if !sh.flags.friendly {
        return Err(Error::NotApplicable("cyclotomic character of an unfriendly pair".into()));
    }
    Ok((2 * sh.m + 1) % q.n_ord().max(1))
}

/// The residue and coset element of the composite `sh2 o sh1` (apply `sh1`
/// first): `m = 2 m1 m2 + m1 + m2` and
/// `f = f2 * f1(x^{2 m2 + 1}, f2^-1 y^{2 m2 + 1} f2)`, evaluated directly
/// through the element images without materializing the composite word.
pub fn compose_key(q: &Quotients, sh2: &GtShadow, sh1: &GtShadow) -> (u64, PermTuple) {
    let n_ord = q.n_ord().max(1);
    let m = (2 * sh1.m * sh2.m + sh1.m + sh2.m) % n_ord;
    let m2 = sh2.m as i64;
    let x_img = q.t3_x12().pow(2 * m2 + 1);
    let y_img = sh2
        .f_elt
        .inverse()
        .compose(&q.t3_x23().pow(2 * m2 + 1))
        .compose(&sh2.f_elt);
    let mut elt = sh2.f_elt.clone();
    for &(sym, exp) in sh1.f_word.letters() {
        let img = match sym {
            Sym::X12 => &x_img,
            Sym::X23 => &y_img,
            _ => unreachable!("shadow words are rank-2"),
        };
        elt = elt.compose(&img.pow(exp));
    }
    (m, elt)
}

/// Composition of shadows over the same target quotients, without the
/// groupoid composability check (valid for settled shadows, where source
/// and target kernels agree). Applies `sh1` first.
pub(crate) fn compose_raw(
    q: &Quotients,
    sh2: &GtShadow,
    sh1: &GtShadow,
) -> Result<GtShadow, Error> {
    let (m, elt) = compose_key(q, sh2, sh1);
    let (domain, table) = match (sh1.domain, sh2.domain) {
        (CosetDomain::Derived, CosetDomain::Derived) => {
            (CosetDomain::Derived, q.qf2_derived_table()?)
        }
        _ => (CosetDomain::Full, q.qf2()?),
    };
    let id = table
        .table()
        .expect("enumerated")
        .id_of(&elt)
        .expect("composite coset lies in the enumeration domain");
    let f_word = table.witness_word(id);
    let flags = classify(q, m, &f_word)?;
    Ok(GtShadow { m, f_word, f_coset_id: id, f_elt: elt, domain, flags })
}

/// Groupoid composition `sh2 o sh1` (apply `sh1` first): the source kernel
/// of `sh2` must coincide with the target kernel of `sh1`.
pub fn compose(
    q2: &Quotients,
    sh2: &GtShadow,
    q1: &Quotients,
    sh1: &GtShadow,
) -> Result<GtShadow, Error> {
    let source2 = source_spec(q2, sh2)?;
    if !crate::groupoid::same_kernel(&source2, q1.spec()) {
        return Err(Error::NotApplicable(format!(
            "shadows are not composable: source kernel of {} differs from target {}",
            sh2.display_line(),
            q1.spec().name
        )));
    }
    compose_raw(q2, sh2, sh1)
}

/// Inverse of a settled shadow inside the finite composition monoid:
/// `sh` composed with itself `k - 1` times, where `k` is its order.
pub fn inverse_in_group(q: &Quotients, sh: &GtShadow) -> Result<GtShadow, Error> {
    if !crate::groupoid::is_settled(q, sh)? {
        return Err(Error::NotApplicable("inverse of an unsettled shadow".into()));
    }
    let identity = identity_shadow(q)?;
    let id_elt = identity.f_elt.clone();
    let mut prev = identity.clone();
    let mut acc = sh.clone();
    loop {
        if acc.m == identity.m && acc.f_elt == id_elt {
            return Ok(prev);
        }
        prev = acc.clone();
        acc = compose_raw(q, sh, &acc)?;
    }
}

/// The spec whose kernel is the source of the shadow: the same degree with
/// the six images replaced by the induced generator images.
pub fn source_spec(q: &Quotients, sh: &GtShadow) -> Result<SubgroupSpec, Error> {
    let images = t4_images(q, sh.m, &sh.f_word)?;
    SubgroupSpec::new(
        format!("{}_src_m{}_c{}", q.spec().name, sh.m, sh.f_coset_id),
        q.spec().degree,
        images,
    )
}

/// Left-regular permutation representation of a closed set of settled
/// shadows over one target: index-aligned permutations of the set, one per
/// shadow, under composition.
pub fn regular_representation(
    q: &Quotients,
    shadows: &[GtShadow],
) -> Result<Vec<PermTuple>, Error> {
    let index: HashMap<(u64, PermTuple), usize> = shadows
        .iter()
        .enumerate()
        .map(|(i, sh)| ((sh.m, sh.f_elt.clone()), i))
        .collect();
    assert_eq!(index.len(), shadows.len(), "duplicate shadows in the set");
    let mut perms = Vec::with_capacity(shadows.len());
    for g in shadows {
        let mut images = Vec::with_capacity(shadows.len());
        for h in shadows {
            let gh = compose_key(q, g, h);
            let target = index.get(&gh).copied().ok_or_else(|| {
                Error::NotApplicable(format!(
                    "composition {} o {} leaves the given set",
                    g.display_line(),
                    h.display_line()
                ))
            })?;
            images.push(target);
        }
        perms.push(PermTuple::single(
            Perm::from_images0(&images).expect("regular representation row"),
        ));
    }
    Ok(perms)
}

/// Builds a classified shadow record from an arbitrary `(m, f)` pair. The
/// coset id lands in the derived domain when the coset lies there, else in
/// the full table.
pub fn shadow_from_word(q: &Quotients, m: u64, f: Word) -> Result<GtShadow, Error> {
    f.check_alphabet(Alphabet::F2)?;
    let m = m % q.n_ord().max(1);
    let flags = classify(q, m, &f)?;
    let elt = q.eval_pure3(&f)?;
    let (domain, id) = if q.qf2_derived().contains(&elt) {
        let t = q.qf2_derived_table()?;
        (
            CosetDomain::Derived,
            t.table().expect("enumerated").id_of(&elt).expect("derived coset"),
        )
    } else {
        let t = q.qf2()?;
        (
            CosetDomain::Full,
            t.table()
                .expect("enumerated")
                .id_of(&elt)
                .expect("rank-2 words evaluate into the quotient"),
        )
    };
    Ok(GtShadow { m, f_word: f, f_coset_id: id, f_elt: elt, domain, flags })
}

/// Parses the `m=<int> f=<word>` serialization into a classified shadow.
/// The word field runs to the end of the line.
pub fn parse_shadow_line(q: &Quotients, line: &str) -> Result<GtShadow, Error> {
    let rest = line
        .trim()
        .strip_prefix("m=")
        .ok_or_else(|| Error::BadWord(format!("shadow line must start with m=: {line:?}")))?;
    let (m_text, f_text) = rest
        .split_once("f=")
        .ok_or_else(|| Error::BadWord(format!("missing f= field in {line:?}")))?;
    let m: u64 = m_text
        .trim()
        .parse()
        .map_err(|_| Error::BadWord(format!("bad residue {:?}", m_text.trim())))?;
    let f = parse_word(f_text.trim())?;
    shadow_from_word(q, m, f)
}
