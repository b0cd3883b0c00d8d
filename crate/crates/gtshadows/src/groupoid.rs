//! The poset/groupoid layer across multiple specs: kernel equality and
//! containment, intersections, settled/isolated decisions, connected
//! components, the intersection of a component, projections between nested
//! kernels and survival tests.
//!
//! Kernel comparisons never enumerate quotient elements: for specs A and B
//! the "pair group" generated by the tuples `(psi_A(x_ij), psi_B(x_ij))`
//! has the order of `im psi_A` exactly when the generator assignment
//! `psi_A(x) -> psi_B(x)` is a well-defined homomorphism, i.e. when
//! `ker psi_A <= ker psi_B`.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use crate::braidq::{build_quotients, QuotientOptions, Quotients, SubgroupSpec, PB4_GENS};
use crate::error::Error;
use crate::fingroup::group_order;
use crate::perm::PermTuple;
use crate::shadows::{
    enumerate_shadows, shadow_from_word, source_spec, EnumMode, GtShadow,
};

fn pair_tuples(a: &SubgroupSpec, b: &SubgroupSpec) -> Vec<PermTuple> {
    PB4_GENS
        .iter()
        .map(|&s| PermTuple::new(vec![a.image(s).clone(), b.image(s).clone()]))
        .collect()
}

fn image_order(spec: &SubgroupSpec) -> u64 {
    let tuples: Vec<PermTuple> =
        PB4_GENS.iter().map(|&s| PermTuple::single(spec.image(s).clone())).collect();
    group_order(&tuples)
}

/// `ker psi_a == ker psi_b`.
pub fn same_kernel(a: &SubgroupSpec, b: &SubgroupSpec) -> bool {
    let pair = group_order(&pair_tuples(a, b));
    pair == image_order(a) && pair == image_order(b)
}

/// `ker psi_k <= ker psi_n`.
pub fn subgroup_leq(k: &SubgroupSpec, n: &SubgroupSpec) -> bool {
    group_order(&pair_tuples(k, n)) == image_order(k)
}

/// The spec whose kernel is the intersection: degree-sum disjoint-union
/// permutations, generator by generator.
pub fn intersect(a: &SubgroupSpec, b: &SubgroupSpec) -> SubgroupSpec {
    let images: Vec<crate::perm::Perm> = PB4_GENS
        .iter()
        .map(|&s| PermTuple::new(vec![a.image(s).clone(), b.image(s).clone()]).flatten())
        .collect();
    SubgroupSpec::new(
        format!("{}_meet_{}", a.name, b.name),
        a.degree + b.degree,
        images.try_into().expect("six images"),
    )
    .expect("intersection of valid specs")
}

/// Is the shadow's source kernel equal to its target kernel?
pub fn is_settled(q: &Quotients, sh: &GtShadow) -> Result<bool, Error> {
    let source = source_spec(q, sh)?;
    let pair = group_order(&pair_tuples(q.spec(), &source));
    Ok(pair == q.q4_order() && pair == image_order(&source))
}

/// Scope of the isolation decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsolationScope {
    /// Every charming shadow is settled (the defining scope).
    Charming,
    /// Every practical shadow is settled (the stricter probe).
    AllPractical,
}

pub fn is_isolated(q: &Quotients, scope: IsolationScope, jobs: usize) -> Result<bool, Error> {
    let mode = match scope {
        IsolationScope::Charming => EnumMode::Charming,
        IsolationScope::AllPractical => EnumMode::Practical,
    };
    for sh in enumerate_shadows(q, mode, jobs)? {
        if !is_settled(q, &sh)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A catalog of specs with memoized quotients and kernel-equality answers.
/// Insertion is single-writer; lookups are safe for concurrent readers.
pub struct Catalog {
    options: QuotientOptions,
    entries: Vec<CatalogEntry>,
    kernel_memo: Mutex<HashMap<(usize, usize), bool>>,
}

struct CatalogEntry {
    spec: SubgroupSpec,
    quotients: OnceLock<Quotients>,
}

impl Catalog {
    pub fn new(options: QuotientOptions) -> Catalog {
        Catalog { options, entries: Vec::new(), kernel_memo: Mutex::new(HashMap::new()) }
    }

    pub fn add(&mut self, spec: SubgroupSpec) -> usize {
        self.entries.push(CatalogEntry { spec, quotients: OnceLock::new() });
        self.entries.len() - 1
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn spec(&self, id: usize) -> &SubgroupSpec {
        &self.entries[id].spec
    }

    pub fn quotients(&self, id: usize) -> Result<&Quotients, Error> {
        let entry = &self.entries[id];
        if let Some(q) = entry.quotients.get() {
            return Ok(q);
        }
        let built = build_quotients(entry.spec.clone(), self.options.clone())?;
        Ok(entry.quotients.get_or_init(|| built))
    }

    /// Memoized kernel equality; the memo key is unordered.
    pub fn same_kernel(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&hit) = self.kernel_memo.lock().unwrap().get(&key) {
            return hit;
        }
        let answer = same_kernel(&self.entries[a].spec, &self.entries[b].spec);
        self.kernel_memo.lock().unwrap().insert(key, answer);
        answer
    }
}

/// One object of a connected component, with its charming shadow count.
#[derive(Debug)]
pub struct ComponentObject {
    pub spec: SubgroupSpec,
    pub charming_count: usize,
}

/// Closure of the target under taking sources of charming shadows, up to
/// kernel equality. The starting spec is always object 0.
pub fn connected_component(q: &Quotients, jobs: usize) -> Result<Vec<ComponentObject>, Error> {
    let options = QuotientOptions { cap: q.cap(), cache_dir: None };
    let mut catalog = Catalog::new(options);
    let start = catalog.add(q.spec().clone());
    let mut out: Vec<ComponentObject> = Vec::new();
    let mut frontier = vec![start];
    while let Some(id) = frontier.pop() {
        let quotients = catalog.quotients(id)?;
        let shadows = enumerate_shadows(quotients, EnumMode::Charming, jobs)?;
        let mut sources: Vec<SubgroupSpec> = Vec::new();
        for sh in &shadows {
            sources.push(source_spec(quotients, sh)?);
        }
        out.push(ComponentObject { spec: catalog.spec(id).clone(), charming_count: shadows.len() });
        for source in sources {
            let sid = catalog.add(source);
            let known = (0..catalog.len())
                .filter(|&other| other != sid)
                .any(|other| catalog.same_kernel(sid, other));
            if !known {
                frontier.push(sid);
            }
        }
    }
    Ok(out)
}

/// The intersection of all objects of the connected component; for an
/// isolated spec this is kernel-equal to the spec itself.
pub fn n_sharp(q: &Quotients, jobs: usize) -> Result<SubgroupSpec, Error> {
    let component = connected_component(q, jobs)?;
    let mut sharp = component[0].spec.clone();
    for object in &component[1..] {
        sharp = intersect(&sharp, &object.spec);
    }
    if component.len() == 1 {
        // nothing intersected; keep the original name
        sharp = component[0].spec.clone();
    }
    Ok(sharp)
}

/// Reinterprets a shadow over `K` as a shadow over `N` (requires
/// `ker K <= ker N`): same representative pair, new residue modulus, new
/// coset. When both subgroups are isolated this is the homomorphism of the
/// two shadow groups induced by the projection of quotients.
pub fn project_shadow(
    qk: &Quotients,
    sh: &GtShadow,
    qn: &Quotients,
) -> Result<GtShadow, Error> {
    if !subgroup_leq(qk.spec(), qn.spec()) {
        return Err(Error::NotApplicable(format!(
            "{} is not contained in {}",
            qk.spec().name,
            qn.spec().name
        )));
    }
    shadow_from_word(qn, sh.m % qn.n_ord().max(1), sh.f_word.clone())
}

/// Does `sh` (a shadow over `N`) lie in the image of the projection from
/// the charming shadows over `K`?
pub fn survives(
    qn: &Quotients,
    sh: &GtShadow,
    qk: &Quotients,
    jobs: usize,
) -> Result<bool, Error> {
    if !subgroup_leq(qk.spec(), qn.spec()) {
        return Err(Error::NotApplicable(format!(
            "{} is not contained in {}",
            qk.spec().name,
            qn.spec().name
        )));
    }
    let target = (sh.m % qn.n_ord().max(1), sh.f_elt.clone());
    for t in enumerate_shadows(qk, EnumMode::Charming, jobs)? {
        let projected = project_shadow(qk, &t, qn)?;
        if (projected.m, projected.f_elt) == target {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidq::{build_quotients, QuotientOptions, SubgroupSpec};
    use crate::shadows::identity_shadow;

    fn quotients(spec: SubgroupSpec) -> Quotients {
        build_quotients(spec, QuotientOptions::default()).unwrap()
    }

    fn ab(q: usize) -> SubgroupSpec {
        SubgroupSpec::cyclic(q).unwrap()
    }

    #[test]
    fn kernel_equality_basics() {
        let phl = SubgroupSpec::philadelphia();
        assert!(same_kernel(&phl, &phl));
        assert!(!same_kernel(&phl, &SubgroupSpec::mighty_dandy()));
        assert!(same_kernel(&intersect(&ab(2), &ab(3)), &ab(6)));
        assert!(same_kernel(&intersect(&ab(1), &phl), &phl));
        assert!(same_kernel(&intersect(&phl, &phl), &phl));
    }

    #[test]
    fn containment_basics() {
        assert!(subgroup_leq(&ab(6), &ab(2)));
        assert!(!subgroup_leq(&ab(2), &ab(6)));
        assert!(subgroup_leq(&ab(6), &ab(6)));
        // intersections sit below both factors
        let meet = intersect(&ab(2), &ab(3));
        assert!(subgroup_leq(&meet, &ab(2)));
        assert!(subgroup_leq(&meet, &ab(3)));
    }

    #[test]
    fn intersect_commutes_up_to_kernel() {
        let a = ab(2);
        let b = ab(3);
        assert!(same_kernel(&intersect(&a, &b), &intersect(&b, &a)));
        let c = ab(5);
        assert!(same_kernel(
            &intersect(&intersect(&a, &b), &c),
            &intersect(&a, &intersect(&b, &c)),
        ));
    }

    #[test]
    fn identity_shadow_is_settled() {
        for spec in [SubgroupSpec::philadelphia(), ab(4), ab(1)] {
            let q = quotients(spec);
            let sh = identity_shadow(&q).unwrap();
            assert!(is_settled(&q, &sh).unwrap());
        }
    }

    #[test]
    fn ab4_is_isolated_with_four_automorphisms() {
        let q = quotients(ab(4));
        assert!(is_isolated(&q, IsolationScope::Charming, 2).unwrap());
        let component = connected_component(&q, 2).unwrap();
        assert_eq!(component.len(), 1);
        assert_eq!(component[0].charming_count, 4);
        let sharp = n_sharp(&q, 2).unwrap();
        assert!(same_kernel(&sharp, q.spec()));
    }

    #[test]
    fn projection_between_cyclic_kernels() {
        let q2 = quotients(ab(2));
        let q6 = quotients(ab(6));
        assert_eq!(q2.n_ord(), 2);
        assert_eq!(q6.n_ord(), 6);
        let up = enumerate_shadows(&q6, crate::shadows::EnumMode::Charming, 1).unwrap();
        assert_eq!(up.len(), 4);
        let down = enumerate_shadows(&q2, crate::shadows::EnumMode::Charming, 1).unwrap();
        assert_eq!(down.len(), 2);
        // identity projects to identity
        let id6 = identity_shadow(&q6).unwrap();
        let projected = project_shadow(&q6, &id6, &q2).unwrap();
        assert_eq!(projected.m, 0);
        assert!(projected.f_elt.is_identity());
        // wrong direction errors
        assert!(project_shadow(&q2, &identity_shadow(&q2).unwrap(), &q6).is_err());
        // every shadow below survives from above
        for sh in &down {
            assert!(survives(&q2, sh, &q6, 1).unwrap());
        }
    }

    #[test]
    fn projection_is_functorial_on_a_cyclic_chain() {
        let q12 = quotients(ab(12));
        let q6 = quotients(ab(6));
        let q2 = quotients(ab(2));
        for sh in enumerate_shadows(&q12, crate::shadows::EnumMode::Charming, 1).unwrap() {
            let via_middle =
                project_shadow(&q6, &project_shadow(&q12, &sh, &q6).unwrap(), &q2).unwrap();
            let direct = project_shadow(&q12, &sh, &q2).unwrap();
            assert_eq!(via_middle.m, direct.m);
            assert_eq!(via_middle.f_elt, direct.f_elt);
        }
    }

    #[test]
    fn catalog_memoizes_kernel_answers() {
        let mut catalog = Catalog::new(QuotientOptions::default());
        let a = catalog.add(ab(2));
        let b = catalog.add(ab(3));
        let meet = catalog.add(intersect(&ab(2), &ab(3)));
        let six = catalog.add(ab(6));
        assert!(catalog.same_kernel(a, a));
        assert!(!catalog.same_kernel(a, b));
        assert!(catalog.same_kernel(meet, six));
        assert!(catalog.same_kernel(six, meet), "memo respects symmetry");
        assert_eq!(catalog.quotients(six).unwrap().n_ord(), 6);
    }
}
