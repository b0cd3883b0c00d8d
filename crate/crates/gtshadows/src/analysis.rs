//! Furusho property reports and the closed form in the Abelian setting,
//! each cross-validating the generic enumeration machinery.

use crate::braidq::Quotients;
use crate::error::Error;
use crate::perm::gcd;
use crate::shadows::{self, shadow_from_word, GtShadow};
use crate::words::Word;

/// Scope of the pentagon-implies-hexagons question.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FurushoMode {
    /// `f` ranges over all cosets of the rank-2 quotient.
    Strong,
    /// `f` ranges over the derived-subgroup cosets.
    Weak,
}

impl FurushoMode {
    pub fn name(self) -> &'static str {
        match self {
            FurushoMode::Strong => "strong",
            FurushoMode::Weak => "weak",
        }
    }
}

/// Counts of pentagon solutions and of those extendable to a full pair by
/// some friendly residue; the property holds when every pentagon solution
/// extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FurushoReport {
    pub mode: FurushoMode,
    pub pentagon_count: u64,
    pub extendable_count: u64,
    pub holds: bool,
}

/// For every `f` in the mode's domain, does the pentagon relation imply
/// the existence of a friendly `m` making both hexagons hold?
pub fn furusho(q: &Quotients, mode: FurushoMode, jobs: usize) -> Result<FurushoReport, Error> {
    let group = match mode {
        FurushoMode::Strong => q.qf2()?,
        FurushoMode::Weak => q.qf2_derived_table()?,
    };
    let counts = shadows::scan_pentagon_extendable(q, group, jobs);
    let (pentagon_count, extendable_count) = counts;
    Ok(FurushoReport {
        mode,
        pentagon_count,
        extendable_count,
        holds: pentagon_count == extendable_count,
    })
}

/// Abelianness of the quotient tower. The three levels are equivalent by
/// construction, so the answers are computed independently and asserted to
/// agree; a disagreement is an implementation bug, not data.
pub fn abelian_setting(q: &Quotients) -> bool {
    let commute = |a: &crate::perm::PermTuple, b: &crate::perm::PermTuple| a.compose(b) == b.compose(a);
    let q3_gens = [q.t3_x12(), q.t3_x23(), q.t3_x13()];
    let mut q3_abelian = true;
    for i in 0..q3_gens.len() {
        for j in (i + 1)..q3_gens.len() {
            q3_abelian &= commute(q3_gens[i], q3_gens[j]);
        }
    }
    let qf2_abelian = commute(q.t3_x12(), q.t3_x23());
    let q4_gens = q.q4().gens();
    let mut q4_abelian = true;
    for i in 0..q4_gens.len() {
        for j in (i + 1)..q4_gens.len() {
            q4_abelian &= q4_gens[i].image.compose(&q4_gens[j].image)
                == q4_gens[j].image.compose(&q4_gens[i].image);
        }
    }
    assert_eq!(q4_abelian, q3_abelian, "abelianness must agree across the tower");
    assert_eq!(q3_abelian, qf2_abelian, "abelianness must agree across the tower");
    q4_abelian
}

/// The closed-form charming set in the Abelian setting: all friendly
/// residues paired with the identity coset. Equals the generic charming
/// enumeration elementwise.
pub fn abelian_closed_form(q: &Quotients) -> Result<Vec<GtShadow>, Error> {
    if !abelian_setting(q) {
        return Err(Error::NotApplicable(
            "closed form applies to the Abelian setting only".into(),
        ));
    }
    let n = q.n_ord().max(1);
    (0..n)
        .filter(|&m| gcd(2 * m + 1, n) == 1)
        .map(|m| shadow_from_word(q, m, Word::identity()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidq::{build_quotients, QuotientOptions, SubgroupSpec};
    use crate::shadows::{enumerate_shadows, EnumMode};

    fn quotients(spec: SubgroupSpec) -> crate::braidq::Quotients {
        build_quotients(spec, QuotientOptions::default()).unwrap()
    }

    #[test]
    fn abelian_setting_detection() {
        assert!(abelian_setting(&quotients(SubgroupSpec::cyclic(5).unwrap())));
        assert!(abelian_setting(&quotients(SubgroupSpec::cyclic(1).unwrap())));
        assert!(!abelian_setting(&quotients(SubgroupSpec::philadelphia())));
    }

    #[test]
    fn closed_form_matches_enumeration_on_small_cyclic() {
        for qn in [1, 4, 6] {
            let q = quotients(SubgroupSpec::cyclic(qn).unwrap());
            let closed = abelian_closed_form(&q).unwrap();
            let enumerated = enumerate_shadows(&q, EnumMode::Charming, 1).unwrap();
            assert_eq!(closed.len(), enumerated.len(), "q = {qn}");
            for (a, b) in closed.iter().zip(enumerated.iter()) {
                assert_eq!(a.key(), b.key());
                assert!(a.flags.charming);
            }
        }
        // the trivial spec has exactly the identity shadow
        let q = quotients(SubgroupSpec::cyclic(1).unwrap());
        let closed = abelian_closed_form(&q).unwrap();
        assert_eq!(closed.len(), 1);
        assert_eq!(closed[0].m, 0);
        assert!(closed[0].f_word.is_identity());
    }

    #[test]
    fn closed_form_refuses_nonabelian() {
        let q = quotients(SubgroupSpec::philadelphia());
        assert!(abelian_closed_form(&q).is_err());
    }

    #[test]
    fn weak_furusho_holds_for_ab4() {
        let q = quotients(SubgroupSpec::cyclic(4).unwrap());
        let report = furusho(&q, FurushoMode::Weak, 1).unwrap();
        assert_eq!(
            report,
            FurushoReport {
                mode: FurushoMode::Weak,
                pentagon_count: 1,
                extendable_count: 1,
                holds: true
            }
        );
    }

    #[test]
    fn strong_mode_domain_contains_weak_mode_domain() {
        let q = quotients(SubgroupSpec::philadelphia());
        let strong = furusho(&q, FurushoMode::Strong, 2).unwrap();
        let weak = furusho(&q, FurushoMode::Weak, 2).unwrap();
        assert!(strong.pentagon_count >= weak.pentagon_count);
        assert!(strong.extendable_count >= weak.extendable_count);
    }
}
