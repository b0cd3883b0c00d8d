//! Permutations and permutation tuples.
//!
//! A [`Perm`] is a bijection of `{1..degree}` stored in one-line form
//! (0-based internally, 1-based in all textual interfaces). A [`PermTuple`]
//! is an ordered list of permutations and is the element type of every
//! quotient group in this crate: multiplication, inversion, equality and
//! hashing are componentwise.
//!
//! Composition convention, fixed crate-wide: `(p * q)(i) = p(q(i))`, so a
//! product of group elements is evaluated right-to-left as functions.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::Error;

/// Images of a permutation. Degrees up to 255 use one byte per point;
/// larger degrees fall back to u32 cells.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Images {
    Small(Box<[u8]>),
    Wide(Box<[u32]>),
}

/// A permutation of `{1..degree}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Perm {
    images: Images,
}

impl Hash for Perm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.images {
            Images::Small(v) => state.write(v),
            Images::Wide(v) => {
                for &x in v.iter() {
                    state.write_u32(x);
                }
            }
        }
    }
}

impl Perm {
    /// Identity permutation on `degree` points. `degree` must be ≥ 1.
    pub fn identity(degree: usize) -> Perm {
        assert!(degree >= 1, "permutation degree must be at least 1");
        if degree <= u8::MAX as usize {
            Perm { images: Images::Small((0..degree as u8).collect()) }
        } else {
            Perm { images: Images::Wide((0..degree as u32).collect()) }
        }
    }

    /// Builds a permutation from 0-based images. Errors unless the images
    /// form a bijection of `0..len`.
    pub fn from_images0(images: &[usize]) -> Result<Perm, Error> {
        let degree = images.len();
        if degree == 0 {
            return Err(Error::BadPerm("empty image list".into()));
        }
        let mut seen = vec![false; degree];
        for &j in images {
            if j >= degree {
                return Err(Error::BadPerm(format!("point {} out of range 1..={degree}", j + 1)));
            }
            if seen[j] {
                return Err(Error::BadPerm(format!("point {} repeated", j + 1)));
            }
            seen[j] = true;
        }
        let perm = if degree <= u8::MAX as usize {
            Perm { images: Images::Small(images.iter().map(|&x| x as u8).collect()) }
        } else {
            Perm { images: Images::Wide(images.iter().map(|&x| x as u32).collect()) }
        };
        Ok(perm)
    }

    /// Builds a permutation from 1-based images (the external convention).
    pub fn from_images1(images: &[usize]) -> Result<Perm, Error> {
        for &j in images {
            if j == 0 {
                return Err(Error::BadPerm("points are 1-based; found 0".into()));
            }
        }
        let shifted: Vec<usize> = images.iter().map(|&x| x - 1).collect();
        Perm::from_images0(&shifted)
    }

    pub fn degree(&self) -> usize {
        match &self.images {
            Images::Small(v) => v.len(),
            Images::Wide(v) => v.len(),
        }
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        match &self.images {
            Images::Small(v) => v[point] as usize,
            Images::Wide(v) => v[point] as usize,
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.images {
            Images::Small(v) => v.iter().enumerate().all(|(i, &j)| i == j as usize),
            Images::Wide(v) => v.iter().enumerate().all(|(i, &j)| i == j as usize),
        }
    }

    /// `(self * other)(i) = self(other(i))`. Panics on degree mismatch;
    /// degrees are fixed within one ambient group.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(
            self.degree(),
            other.degree(),
            "degree mismatch in permutation product"
        );
        match (&self.images, &other.images) {
            (Images::Small(a), Images::Small(b)) => {
                Perm { images: Images::Small(b.iter().map(|&i| a[i as usize]).collect()) }
            }
            (Images::Wide(a), Images::Wide(b)) => {
                Perm { images: Images::Wide(b.iter().map(|&i| a[i as usize]).collect()) }
            }
            // constructor picks the representation from the degree alone
            _ => unreachable!("mixed cell widths at equal degree"),
        }
    }

    pub fn inverse(&self) -> Perm {
        match &self.images {
            Images::Small(v) => {
                let mut r = vec![0u8; v.len()];
                for (i, &j) in v.iter().enumerate() {
                    r[j as usize] = i as u8;
                }
                Perm { images: Images::Small(r.into()) }
            }
            Images::Wide(v) => {
                let mut r = vec![0u32; v.len()];
                for (i, &j) in v.iter().enumerate() {
                    r[j as usize] = i as u32;
                }
                Perm { images: Images::Wide(r.into()) }
            }
        }
    }

    /// `self^k` by repeated squaring; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Perm {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Smallest k ≥ 1 with `self^k` = identity (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut ord = 1u64;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.apply(p);
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    /// Disjoint cycles as 1-based point lists, sorted by least moved point.
    /// Fixed points are omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cyc.push(p + 1);
                p = self.apply(p);
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Perm {
    /// Canonical form: disjoint cycles sorted by least moved point,
    /// e.g. `(1,3,2)(4,6,5)`; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, p) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

/// Parses disjoint-cycle text (`(1,3,2)(4,6,5)`, `()`) or one-line bracket
/// text (`[3 1 2]`) into a permutation of the given degree. Points not
/// mentioned are fixed. Cycle points may be separated by commas or spaces.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, Error> {
    let text = text.trim();
    if degree < 1 {
        return Err(Error::BadPerm("degree must be at least 1".into()));
    }
    if text.starts_with('[') {
        if !text.ends_with(']') {
            return Err(Error::BadPerm(format!("unterminated one-line form: {text}")));
        }
        let inner = &text[1..text.len() - 1];
        let points = parse_points(inner)?;
        if points.len() != degree {
            return Err(Error::BadPerm(format!(
                "one-line form lists {} points, expected {degree}",
                points.len()
            )));
        }
        return Perm::from_images1(&points);
    }
    if !text.starts_with('(') {
        return Err(Error::BadPerm(format!("expected cycle or one-line notation: {text}")));
    }
    let mut images: Vec<usize> = (0..degree).collect();
    let mut moved = vec![false; degree];
    let mut rest = text;
    while !rest.is_empty() {
        let close = rest
            .find(')')
            .ok_or_else(|| Error::BadPerm(format!("unterminated cycle in {text}")))?;
        if !rest.starts_with('(') {
            return Err(Error::BadPerm(format!("malformed cycle text: {text}")));
        }
        let body = &rest[1..close];
        rest = rest[close + 1..].trim_start();
        let points = parse_points(body)?;
        if points.is_empty() {
            continue; // "()" denotes the identity
        }
        if points.len() == 1 {
            return Err(Error::BadPerm(format!("cycle of length 1 in {text}")));
        }
        for &p in &points {
            if p == 0 || p > degree {
                return Err(Error::BadPerm(format!("point {p} out of range 1..={degree}")));
            }
            if moved[p - 1] {
                return Err(Error::BadPerm(format!("point {p} repeated")));
            }
            moved[p - 1] = true;
        }
        for i in 0..points.len() {
            images[points[i] - 1] = points[(i + 1) % points.len()] - 1;
        }
    }
    Perm::from_images0(&images)
}

fn parse_points(body: &str) -> Result<Vec<usize>, Error> {
    body.split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::BadPerm(format!("bad point {s:?}")))
        })
        .collect()
}

/// An element of a quotient group: one permutation per constituent
/// homomorphism. Slot count and per-slot degrees are fixed within one
/// ambient group; degrees may differ between slots.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermTuple {
    parts: Box<[Perm]>,
}

impl PermTuple {
    pub fn new(parts: Vec<Perm>) -> PermTuple {
        assert!(!parts.is_empty(), "a permutation tuple needs at least one slot");
        PermTuple { parts: parts.into() }
    }

    pub fn single(p: Perm) -> PermTuple {
        PermTuple { parts: vec![p].into() }
    }

    pub fn identity_like(&self) -> PermTuple {
        PermTuple {
            parts: self.parts.iter().map(|p| Perm::identity(p.degree())).collect(),
        }
    }

    pub fn slots(&self) -> &[Perm] {
        &self.parts
    }

    pub fn slot(&self, i: usize) -> &Perm {
        &self.parts[i]
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(Perm::is_identity)
    }

    pub fn compose(&self, other: &PermTuple) -> PermTuple {
        assert_eq!(self.parts.len(), other.parts.len(), "slot count mismatch");
        PermTuple {
            parts: self
                .parts
                .iter()
                .zip(other.parts.iter())
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn inverse(&self) -> PermTuple {
        PermTuple { parts: self.parts.iter().map(Perm::inverse).collect() }
    }

    pub fn pow(&self, k: i64) -> PermTuple {
        PermTuple { parts: self.parts.iter().map(|p| p.pow(k)).collect() }
    }

    /// lcm of the slot orders.
    pub fn order(&self) -> u64 {
        self.parts.iter().map(Perm::order).fold(1, lcm)
    }

    /// Do `self` and `other` live in the same ambient shape?
    pub fn same_shape(&self, other: &PermTuple) -> bool {
        self.parts.len() == other.parts.len()
            && self
                .parts
                .iter()
                .zip(other.parts.iter())
                .all(|(a, b)| a.degree() == b.degree())
    }

    /// One permutation on the disjoint union of the slot domains. Used to
    /// feed tuples into the stabilizer chain.
    pub fn flatten(&self) -> Perm {
        let total: usize = self.parts.iter().map(Perm::degree).sum();
        let mut images = Vec::with_capacity(total);
        let mut offset = 0;
        for p in self.parts.iter() {
            for i in 0..p.degree() {
                images.push(offset + p.apply(i));
            }
            offset += p.degree();
        }
        Perm::from_images0(&images).expect("flattened bijection")
    }
}

impl fmt::Display for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermTuple({self})")
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 { 0 } else { a / gcd(a, b) * b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::hash_map::DefaultHasher;

    fn perm1(images: &[usize]) -> Perm {
        Perm::from_images1(images).unwrap()
    }

    fn random_perm(rng: &mut StdRng, degree: usize) -> Perm {
        // Fisher-Yates
        let mut images: Vec<usize> = (0..degree).collect();
        for i in (1..degree).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Perm::from_images0(&images).unwrap()
    }

    #[test]
    fn compose_examples() {
        let p = perm1(&[2, 3, 1]);
        let q = perm1(&[2, 1, 3]);
        assert_eq!(p.compose(&q), perm1(&[3, 2, 1]));
        assert_eq!(p.compose(&Perm::identity(3)), p);
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn compose_with_inverse_philadelphia_g12() {
        let g12 = parse_cycles("(1,3,2)(4,6,5)", 9).unwrap();
        assert!(g12.compose(&g12.inverse()).is_identity());
        assert_eq!(g12.order(), 3);
    }

    #[test]
    #[should_panic(expected = "degree mismatch")]
    fn compose_degree_mismatch_panics() {
        let _ = Perm::identity(3).compose(&Perm::identity(4));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(perm1(&[2, 3, 1]).inverse(), perm1(&[3, 1, 2]));
        assert_eq!(Perm::identity(5).inverse(), Perm::identity(5));
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let d = 1 + rng.gen_range(0..40);
            let p = random_perm(&mut rng, d);
            assert_eq!(p.inverse().inverse(), p);
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(Perm::identity(4).order(), 1);
        assert_eq!(parse_cycles("(1,2)(3,4,5)", 6).unwrap().order(), 6);
        assert_eq!(parse_cycles("(1,2,3,4,5,6)", 6).unwrap().order(), 6);
    }

    #[test]
    fn parse_cycle_examples() {
        assert_eq!(
            parse_cycles("(1,3,2)(4,6,5)", 9).unwrap(),
            perm1(&[3, 1, 2, 6, 4, 5, 7, 8, 9])
        );
        assert_eq!(parse_cycles("()", 4).unwrap(), Perm::identity(4));
        assert_eq!(parse_cycles("[3 1 2]", 3).unwrap(), perm1(&[3, 1, 2]));
        assert_eq!(parse_cycles("(1, 3, 2)(4, 6, 5)", 9).unwrap(), parse_cycles("(1,3,2)(4,6,5)", 9).unwrap());
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!(parse_cycles("(1,2", 4).is_err());
        assert!(parse_cycles("(1,2)(2,3)", 4).is_err()); // repeated point
        assert!(parse_cycles("(1,5)", 4).is_err()); // out of range
        assert!(parse_cycles("[1 2]", 3).is_err()); // wrong length
        assert!(parse_cycles("nonsense", 3).is_err());
    }

    #[test]
    fn print_parse_roundtrip() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let d = 1 + rng.gen_range(0..30);
            let p = random_perm(&mut rng, d);
            let printed = p.to_string();
            assert_eq!(parse_cycles(&printed, p.degree()).unwrap(), p, "text {printed}");
        }
        // wide fallback
        let big = random_perm(&mut rng, 300);
        assert_eq!(parse_cycles(&big.to_string(), 300).unwrap(), big);
    }

    #[test]
    fn wide_fallback_behaves_like_small() {
        let mut rng = StdRng::seed_from_u64(3);
        let p = random_perm(&mut rng, 400);
        let q = random_perm(&mut rng, 400);
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.compose(&q).inverse(), q.inverse().compose(&p.inverse()));
        assert_eq!(p.pow(p.order() as i64), Perm::identity(400));
    }

    proptest! {
        #[test]
        fn associativity(seed in any::<u64>()) {
            let mut rng = StdRng::seed_from_u64(seed);
            let d = 1 + rng.gen_range(0..20);
            let a = random_perm(&mut rng, d);
            let b = random_perm(&mut rng, d);
            let c = random_perm(&mut rng, d);
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn pow_matches_iteration(seed in any::<u64>(), k in 0i64..20) {
            let mut rng = StdRng::seed_from_u64(seed);
            let p = random_perm(&mut rng, 9);
            let mut it = Perm::identity(9);
            for _ in 0..k {
                it = it.compose(&p);
            }
            prop_assert_eq!(p.pow(k), it);
            prop_assert_eq!(p.pow(-k), p.pow(k).inverse());
        }
    }

    fn hash_of<T: Hash>(t: &T) -> u64 {
        let mut h = DefaultHasher::new();
        t.hash(&mut h);
        h.finish()
    }

    #[test]
    fn tuple_hash_consistency_million() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..1_000_000 {
            let d1 = 1 + rng.gen_range(0..6);
            let d2 = 1 + rng.gen_range(0..6);
            let t = PermTuple::new(vec![random_perm(&mut rng, d1), random_perm(&mut rng, d2)]);
            let u = t.clone();
            assert_eq!(t, u);
            assert_eq!(hash_of(&t), hash_of(&u));
        }
    }

    #[test]
    fn tuple_flatten_is_homomorphic() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..100 {
            let a = PermTuple::new(vec![random_perm(&mut rng, 4), random_perm(&mut rng, 7)]);
            let b = PermTuple::new(vec![random_perm(&mut rng, 4), random_perm(&mut rng, 7)]);
            assert_eq!(a.flatten().compose(&b.flatten()), a.compose(&b).flatten());
            assert_eq!(a.flatten().inverse(), a.inverse().flatten());
        }
    }

    #[test]
    fn tuple_order_is_lcm_of_slots() {
        let t = PermTuple::new(vec![
            parse_cycles("(1,2)", 2).unwrap(),
            parse_cycles("(1,2,3)", 3).unwrap(),
        ]);
        assert_eq!(t.order(), 6);
        assert!(t.pow(6).is_identity());
        assert!(!t.pow(3).is_identity());
    }
}
