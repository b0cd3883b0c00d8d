//! Finite permutation-group engine.
//!
//! Two backends sit behind [`FinGroup`]: an exhaustive breadth-first element
//! table (supports iteration, dense ids and word witnesses) and a stabilizer
//! chain (supports order and membership without listing elements). Tuples
//! are flattened to single permutations on the disjoint union of their slot
//! domains before entering the chain.
//!
//! Determinism contract: element ids are breadth-first discovery order under
//! the fixed multiplier order "generators, then their novel inverses"; all
//! canonical outputs downstream sort by these ids.

use std::collections::HashMap;
use std::io::{self, Read};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::perm::{lcm, Perm, PermTuple};
use crate::words::{Sym, Word};

/// Default cap on enumerated elements, overridable per call.
pub const DEFAULT_ELEMENT_CAP: usize = 50_000_000;

/// A labeled generator: its image in the ambient permutation product and,
/// optionally, its expression as a word in the root alphabet (used to
/// expand element witnesses back into substitutable words).
#[derive(Debug, Clone)]
pub struct Generator {
    pub word: Option<Word>,
    pub image: PermTuple,
}

impl Generator {
    pub fn new(word: Word, image: PermTuple) -> Generator {
        Generator { word: Some(word), image }
    }

    pub fn unnamed(image: PermTuple) -> Generator {
        Generator { word: None, image }
    }

    pub fn of_sym(sym: Sym, image: PermTuple) -> Generator {
        Generator { word: Some(Word::gen(sym)), image }
    }
}

#[derive(Debug, Clone)]
struct Multiplier {
    inverted: bool,
    gen_idx: usize,
    image: PermTuple,
}

/// Exhaustive element table in breadth-first discovery order.
#[derive(Debug)]
pub struct ExhaustiveTable {
    elements: Vec<PermTuple>,
    index: HashMap<PermTuple, u32>,
    multipliers: Vec<Multiplier>,
    /// `(parent id, multiplier index)` per element; element 0 is the identity.
    provenance: Vec<(u32, u16)>,
}

impl ExhaustiveTable {
    fn build(gens: &[Generator], cap: usize) -> Result<ExhaustiveTable, Error> {
        assert!(!gens.is_empty(), "enumeration needs at least one generator");
        let identity = gens[0].image.identity_like();
        let mut multipliers: Vec<Multiplier> = Vec::new();
        for (gen_idx, g) in gens.iter().enumerate() {
            if multipliers.iter().all(|m| m.image != g.image) {
                multipliers.push(Multiplier { inverted: false, gen_idx, image: g.image.clone() });
            }
        }
        for (gen_idx, g) in gens.iter().enumerate() {
            let inv = g.image.inverse();
            if multipliers.iter().all(|m| m.image != inv) {
                multipliers.push(Multiplier { inverted: true, gen_idx, image: inv });
            }
        }

        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0u32);
        let mut provenance = vec![(0u32, 0u16)];
        let mut cursor = 0usize;
        while cursor < elements.len() {
            let current = elements[cursor].clone();
            for (mi, m) in multipliers.iter().enumerate() {
                let next = current.compose(&m.image);
                if !index.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded { cap, reached: elements.len() });
                    }
                    let id = elements.len() as u32;
                    index.insert(next.clone(), id);
                    elements.push(next);
                    provenance.push((cursor as u32, mi as u16));
                }
            }
            cursor += 1;
        }
        Ok(ExhaustiveTable { elements, index, multipliers, provenance })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PermTuple] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> &PermTuple {
        &self.elements[id as usize]
    }

    pub fn id_of(&self, g: &PermTuple) -> Option<u32> {
        self.index.get(g).copied()
    }

    /// `(parent id, multiplier index)` pairs in id order. Parents always
    /// precede children, which lets callers compute data per element
    /// incrementally (value(child) = value(parent) * value(multiplier)).
    pub fn provenance(&self) -> &[(u32, u16)] {
        &self.provenance
    }

    pub fn multiplier_count(&self) -> usize {
        self.multipliers.len()
    }

    /// Evaluates `op` for every multiplier, in multiplier order.
    pub fn multiplier_map<T>(&self, mut op: impl FnMut(usize, bool, &PermTuple) -> T) -> Vec<T> {
        self.multipliers
            .iter()
            .map(|m| op(m.gen_idx, m.inverted, &m.image))
            .collect()
    }
}

/// One level of a stabilizer chain.
#[derive(Debug)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    /// orbit point -> index into `reps`, or usize::MAX
    orbit_slot: Vec<u32>,
    /// reps[i] maps `point` to the i-th orbit point
    reps: Vec<Perm>,
}

const NO_SLOT: u32 = u32::MAX;

impl Level {
    fn new(point: usize, degree: usize) -> Level {
        let mut orbit_slot = vec![NO_SLOT; degree];
        orbit_slot[point] = 0;
        Level { point, gens: Vec::new(), orbit_slot, reps: vec![Perm::identity(degree)] }
    }

    fn rep_for(&self, p: usize) -> Option<&Perm> {
        match self.orbit_slot[p] {
            NO_SLOT => None,
            i => Some(&self.reps[i as usize]),
        }
    }
}

/// Deterministic incremental Schreier-Sims chain over single permutations.
#[derive(Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize) -> StabChain {
        StabChain { degree, levels: Vec::new() }
    }

    pub fn from_gens(degree: usize, gens: impl IntoIterator<Item = Perm>) -> StabChain {
        let mut chain = StabChain::new(degree);
        for g in gens {
            chain.insert(g);
        }
        chain
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.reps.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        assert_eq!(g.degree(), self.degree, "degree mismatch in chain membership");
        self.residue(g).is_identity()
    }

    fn residue(&self, g: &Perm) -> Perm {
        let mut g = g.clone();
        for level in &self.levels {
            if g.is_identity() {
                break;
            }
            let p = g.apply(level.point);
            if p == level.point {
                continue;
            }
            match level.rep_for(p) {
                Some(rep) => g = rep.inverse().compose(&g),
                None => break,
            }
        }
        g
    }

    /// Adds `g` to the group if not already a member, restoring chain
    /// completeness (every Schreier generator of every level sifts to the
    /// identity) before returning.
    pub fn insert(&mut self, g: Perm) {
        assert_eq!(g.degree(), self.degree, "degree mismatch in chain insert");
        let mut pending = vec![g];
        while let Some(h) = pending.pop() {
            let Some((stuck, residue)) = self.sift_residue(h) else { continue };
            let level_idx = match stuck {
                Some(idx) => idx,
                None => {
                    let point = (0..self.degree)
                        .find(|&p| residue.apply(p) != p)
                        .expect("non-identity permutation moves a point");
                    self.levels.push(Level::new(point, self.degree));
                    self.levels.len() - 1
                }
            };
            // the residue fixes every base point above its level, but can
            // still extend those orbits through non-base points
            for m in 0..=level_idx {
                self.levels[m].gens.push(residue.clone());
                self.rebuild_orbit(m, &mut pending);
            }
        }
    }

    /// Sifts `h`; returns the level at which it got stuck (or `None` for
    /// "fixes all base points") together with the residue, or `None` when
    /// `h` is already a member.
    fn sift_residue(&self, h: Perm) -> Option<(Option<usize>, Perm)> {
        let mut g = h;
        for (idx, level) in self.levels.iter().enumerate() {
            if g.is_identity() {
                return None;
            }
            let p = g.apply(level.point);
            if p == level.point {
                continue;
            }
            match level.rep_for(p) {
                Some(rep) => g = rep.inverse().compose(&g),
                None => return Some((Some(idx), g)),
            }
        }
        if g.is_identity() {
            None
        } else {
            Some((None, g))
        }
    }

    fn rebuild_orbit(&mut self, level_idx: usize, pending: &mut Vec<Perm>) {
        let degree = self.degree;
        let level = &mut self.levels[level_idx];
        let mut orbit_slot = vec![NO_SLOT; degree];
        orbit_slot[level.point] = 0;
        let mut reps = vec![Perm::identity(degree)];
        let mut cursor = 0usize;
        while cursor < reps.len() {
            let rep = reps[cursor].clone();
            let p = rep.apply(level.point);
            for s in &level.gens {
                let q = s.apply(p);
                if orbit_slot[q] == NO_SLOT {
                    orbit_slot[q] = reps.len() as u32;
                    reps.push(s.compose(&rep));
                } else {
                    let u_q = &reps[orbit_slot[q] as usize];
                    let candidate = u_q.inverse().compose(&s.compose(&rep));
                    if !candidate.is_identity() {
                        pending.push(candidate);
                    }
                }
            }
            cursor += 1;
        }
        level.orbit_slot = orbit_slot;
        level.reps = reps;
    }
}

enum Backend {
    Exhaustive(ExhaustiveTable),
    Chain(StabChain),
}

/// A finite permutation group presented by generators, backed either by an
/// exhaustive breadth-first table or by a stabilizer chain.
pub struct FinGroup {
    gens: Vec<Generator>,
    backend: Backend,
}

impl FinGroup {
    /// Breadth-first closure of the generators. Discovery order is
    /// deterministic given generator order; witnesses (when requested) are
    /// the breadth-first words over the generator expressions.
    pub fn enumerate(gens: Vec<Generator>, with_witnesses: bool, cap: usize) -> Result<FinGroup, Error> {
        if with_witnesses {
            assert!(
                gens.iter().all(|g| g.word.is_some()),
                "witness enumeration needs a word for every generator"
            );
        }
        let table = ExhaustiveTable::build(&gens, cap)?;
        Ok(FinGroup { gens, backend: Backend::Exhaustive(table) })
    }

    /// Chain-backed group: order and membership without an element list.
    pub fn via_chain(gens: Vec<Generator>) -> FinGroup {
        assert!(!gens.is_empty());
        let chain = StabChain::from_gens(
            flat_degree(&gens[0].image),
            gens.iter().map(|g| g.image.flatten()),
        );
        FinGroup { gens, backend: Backend::Chain(chain) }
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn order(&self) -> u64 {
        match &self.backend {
            Backend::Exhaustive(t) => t.len() as u64,
            Backend::Chain(c) => {
                let o = c.order();
                u64::try_from(o).expect("group order fits in u64")
            }
        }
    }

    pub fn contains(&self, g: &PermTuple) -> bool {
        assert!(
            g.same_shape(&self.gens[0].image),
            "shape mismatch in group membership test"
        );
        match &self.backend {
            Backend::Exhaustive(t) => t.id_of(g).is_some(),
            Backend::Chain(c) => c.contains(&g.flatten()),
        }
    }

    pub fn table(&self) -> Option<&ExhaustiveTable> {
        match &self.backend {
            Backend::Exhaustive(t) => Some(t),
            Backend::Chain(_) => None,
        }
    }

    /// The breadth-first witness of an element, expanded into the root
    /// alphabet through the generator expressions.
    pub fn witness_word(&self, id: u32) -> Word {
        let table = self.table().expect("witnesses need the exhaustive backend");
        let words = table.multiplier_map(|gen_idx, inverted, _| {
            let w = self.gens[gen_idx].word.clone().expect("generator word");
            if inverted {
                w.inverse()
            } else {
                w
            }
        });
        let mut chunks: Vec<u16> = Vec::new();
        let mut id = id;
        while id != 0 {
            let (parent, mult) = table.provenance()[id as usize];
            chunks.push(mult);
            id = parent;
        }
        let mut out = Word::identity();
        for &mult in chunks.iter().rev() {
            out = out.concat(&words[mult as usize]);
        }
        out
    }

    /// Closure of the conjugates of the commutators of the generators.
    /// Chain-backed; generator expressions are products of conjugated
    /// commutator words whenever the parent generators carry words.
    pub fn derived_subgroup(&self) -> FinGroup {
        let base: Vec<&Generator> = self.gens.iter().collect();
        let degree = flat_degree(&base[0].image);
        let mut chain = StabChain::new(degree);
        let mut out: Vec<Generator> = Vec::new();
        let mut queue: Vec<Generator> = Vec::new();
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                let a = &base[i];
                let b = &base[j];
                let image = commutator(&a.image, &b.image);
                let word = match (&a.word, &b.word) {
                    (Some(wa), Some(wb)) => Some(wa.commutator(wb)),
                    _ => None,
                };
                queue.push(Generator { word, image });
            }
        }
        // conjugating multipliers: parent generators and their inverses
        let mut conjugators: Vec<(Option<Word>, PermTuple)> = Vec::new();
        for g in &base {
            conjugators.push((g.word.clone(), g.image.clone()));
            conjugators.push((g.word.as_ref().map(Word::inverse), g.image.inverse()));
        }
        let mut cursor = 0;
        while cursor < queue.len() {
            let g = queue[cursor].clone();
            cursor += 1;
            let flat = g.image.flatten();
            if chain.contains(&flat) {
                continue;
            }
            chain.insert(flat);
            for (cw, cimg) in &conjugators {
                let image = cimg.inverse().compose(&g.image).compose(cimg);
                let word = match (&g.word, cw) {
                    (Some(w), Some(c)) => Some(w.conjugated_by(c)),
                    _ => None,
                };
                queue.push(Generator { word, image });
            }
            out.push(g);
        }
        if out.is_empty() {
            // abelian: trivial derived subgroup
            let id = self.gens[0].image.identity_like();
            out.push(Generator { word: Some(Word::identity()), image: id });
        }
        FinGroup { backend: Backend::Chain(chain), gens: out }
    }

    /// Re-enumerates this group's generators into an exhaustive table.
    pub fn enumerated(&self, with_witnesses: bool, cap: usize) -> Result<FinGroup, Error> {
        FinGroup::enumerate(self.gens.clone(), with_witnesses, cap)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.gens;
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                let ab = gens[i].image.compose(&gens[j].image);
                let ba = gens[j].image.compose(&gens[i].image);
                if ab != ba {
                    return false;
                }
            }
        }
        true
    }

    /// Primary decomposition of an abelian exhaustive group, as prime-power
    /// cyclic orders sorted ascending. The trivial group gives an empty list.
    pub fn abelian_invariants(&self) -> Result<Vec<u64>, Error> {
        if !self.is_abelian() {
            return Err(Error::NotApplicable("abelian_invariants of a non-abelian group".into()));
        }
        let table = self
            .table()
            .ok_or_else(|| Error::NotApplicable("abelian_invariants needs an enumerated group".into()))?;
        let orders: Vec<u64> = table.elements().iter().map(PermTuple::order).collect();
        let exponent = orders.iter().copied().fold(1, lcm);
        let mut out = Vec::new();
        for p in prime_factors(exponent) {
            let max_k = log_of_p_part(exponent, p) as usize;
            // exps[k] = log_p #{g : g^(p^k) = e}; the partition of the
            // p-primary part falls out of the successive differences.
            let mut exps = vec![0u32; max_k + 1];
            for (k, e) in exps.iter_mut().enumerate().skip(1) {
                let pk = p.pow(k as u32);
                let n = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
                *e = log_exact(n, p);
            }
            let parts_ge: Vec<u32> = (1..=max_k).map(|k| exps[k] - exps[k - 1]).collect();
            for k in 0..parts_ge.len() {
                let next = if k + 1 < parts_ge.len() { parts_ge[k + 1] } else { 0 };
                for _ in 0..(parts_ge[k] - next) {
                    out.push(p.pow((k + 1) as u32));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Searches for a tuple of elements satisfying every relator and
    /// generating the whole group. Relator words use the positional symbols
    /// x12, x23, x13, ... for presentation generators 1, 2, 3, ...
    /// Exhaustive search; `None` is a valid answer.
    pub fn match_presentation(&self, rank: usize, relators: &[Word]) -> Result<Option<Vec<u32>>, Error> {
        const PRES_SYMS: [Sym; 6] = [Sym::X12, Sym::X23, Sym::X13, Sym::X14, Sym::X24, Sym::X34];
        assert!(rank <= PRES_SYMS.len(), "presentation rank too large");
        let table = self
            .table()
            .ok_or_else(|| Error::NotApplicable("presentation matching needs an enumerated group".into()))?;
        if table.len() > 10_000 {
            return Err(Error::NotApplicable(format!(
                "presentation matching is meant for small groups (|G| = {})",
                table.len()
            )));
        }
        // per-symbol order constraints from single-symbol relators
        let mut order_divides: Vec<Option<u64>> = vec![None; rank];
        for rel in relators {
            if rel.len() == 1 {
                let (sym, exp) = rel.letters()[0];
                if let Some(pos) = PRES_SYMS[..rank].iter().position(|&s| s == sym) {
                    let e = exp.unsigned_abs();
                    order_divides[pos] = Some(match order_divides[pos] {
                        Some(prev) => crate::perm::gcd(prev, e),
                        None => e,
                    });
                }
            }
        }
        let orders: Vec<u64> = table.elements().iter().map(PermTuple::order).collect();
        let mut assignment = vec![0u32; rank];
        let found = self.search_assignment(
            table,
            &orders,
            &order_divides,
            relators,
            rank,
            &PRES_SYMS,
            &mut assignment,
            0,
        );
        Ok(found.then_some(assignment))
    }

    #[allow(clippy::too_many_arguments)]
    fn search_assignment(
        &self,
        table: &ExhaustiveTable,
        orders: &[u64],
        order_divides: &[Option<u64>],
        relators: &[Word],
        rank: usize,
        syms: &[Sym; 6],
        assignment: &mut [u32],
        depth: usize,
    ) -> bool {
        if depth == rank {
            return self.assignment_works(table, assignment, relators, rank, syms);
        }
        for id in 0..table.len() as u32 {
            if let Some(d) = order_divides[depth] {
                if d % orders[id as usize] != 0 {
                    continue;
                }
            }
            assignment[depth] = id;
            if self.search_assignment(table, orders, order_divides, relators, rank, syms, assignment, depth + 1) {
                return true;
            }
        }
        false
    }

    fn assignment_works(
        &self,
        table: &ExhaustiveTable,
        assignment: &[u32],
        relators: &[Word],
        rank: usize,
        syms: &[Sym; 6],
    ) -> bool {
        let lookup = |sym: Sym| -> Option<&PermTuple> {
            syms[..rank]
                .iter()
                .position(|&s| s == sym)
                .map(|i| table.element(assignment[i]))
        };
        for rel in relators {
            let mut acc = table.element(0).identity_like();
            for &(sym, exp) in rel.letters() {
                let Some(img) = lookup(sym) else { return false };
                acc = acc.compose(&img.pow(exp));
            }
            if !acc.is_identity() {
                return false;
            }
        }
        // the assigned elements must generate the whole group
        let mut seen = vec![false; table.len()];
        seen[0] = true;
        let mut frontier = vec![0u32];
        let mut count = 1usize;
        let gens: Vec<&PermTuple> = assignment.iter().map(|&id| table.element(id)).collect();
        while let Some(id) = frontier.pop() {
            let cur = table.element(id);
            for g in &gens {
                for img in [cur.compose(g), cur.compose(&g.inverse())] {
                    let nid = table.id_of(&img).expect("closed table");
                    if !seen[nid as usize] {
                        seen[nid as usize] = true;
                        count += 1;
                        frontier.push(nid);
                    }
                }
            }
        }
        count == table.len()
    }

    /// Content hash of the generator images; the cache key.
    pub fn cache_key(&self) -> String {
        let mut hasher = Sha256::new();
        for g in &self.gens {
            for p in g.image.slots() {
                hasher.update((p.degree() as u64).to_le_bytes());
                for i in 0..p.degree() {
                    hasher.update((p.apply(i) as u32).to_le_bytes());
                }
            }
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Writes the exhaustive table to `path` (header, element records in id
    /// order, witness section).
    pub fn write_cache(&self, path: &Path) -> io::Result<()> {
        let table = self.table().expect("cache needs the exhaustive backend");
        let mut buf: Vec<u8> = Vec::new();
        buf.extend_from_slice(b"GTSHGRP1");
        let shape: Vec<usize> = self.gens[0].image.slots().iter().map(Perm::degree).collect();
        buf.extend_from_slice(&(shape.len() as u32).to_le_bytes());
        for d in &shape {
            buf.extend_from_slice(&(*d as u32).to_le_bytes());
        }
        buf.extend_from_slice(&(table.len() as u64).to_le_bytes());
        buf.extend_from_slice(&(self.gens.len() as u32).to_le_bytes());
        for g in &self.gens {
            write_tuple(&mut buf, &g.image);
        }
        for e in table.elements() {
            write_tuple(&mut buf, e);
        }
        for &(parent, mult) in table.provenance() {
            buf.extend_from_slice(&parent.to_le_bytes());
            buf.extend_from_slice(&mult.to_le_bytes());
        }
        std::fs::write(path, buf)
    }

    /// Reads a table cached by [`FinGroup::write_cache`]. The stored
    /// generators must match `gens` exactly (same images, same order);
    /// otherwise the cache is rejected and `None` is returned.
    pub fn read_cache(path: &Path, gens: Vec<Generator>) -> io::Result<Option<FinGroup>> {
        let mut file = match std::fs::File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut buf = Vec::new();
        file.read_to_end(&mut buf)?;
        let mut r = Reader { buf: &buf, at: 0 };
        if r.take(8)? != b"GTSHGRP1" {
            return Ok(None);
        }
        let slot_count = read_u32(r.take(4)?) as usize;
        let mut shape = Vec::with_capacity(slot_count);
        for _ in 0..slot_count {
            shape.push(read_u32(r.take(4)?) as usize);
        }
        let order = read_u64(r.take(8)?) as usize;
        let gen_count = read_u32(r.take(4)?) as usize;
        if gen_count != gens.len() {
            return Ok(None);
        }
        let mut stored_gens = Vec::with_capacity(gen_count);
        for _ in 0..gen_count {
            stored_gens.push(r.read_tuple(&shape)?);
        }
        if stored_gens.iter().zip(gens.iter()).any(|(a, b)| *a != b.image) {
            return Ok(None);
        }
        let mut elements = Vec::with_capacity(order);
        for _ in 0..order {
            elements.push(r.read_tuple(&shape)?);
        }
        let mut provenance = Vec::with_capacity(order);
        for _ in 0..order {
            let parent = read_u32(r.take(4)?);
            let mult = u16::from_le_bytes(r.take(2)?.try_into().unwrap());
            provenance.push((parent, mult));
        }
        let mut index = HashMap::with_capacity(order);
        for (i, e) in elements.iter().enumerate() {
            index.insert(e.clone(), i as u32);
        }
        let mut multipliers: Vec<Multiplier> = Vec::new();
        for (gen_idx, g) in gens.iter().enumerate() {
            if multipliers.iter().all(|m| m.image != g.image) {
                multipliers.push(Multiplier { inverted: false, gen_idx, image: g.image.clone() });
            }
        }
        for (gen_idx, g) in gens.iter().enumerate() {
            let inv = g.image.inverse();
            if multipliers.iter().all(|m| m.image != inv) {
                multipliers.push(Multiplier { inverted: true, gen_idx, image: inv });
            }
        }
        let table = ExhaustiveTable { elements, index, multipliers, provenance };
        Ok(Some(FinGroup { gens, backend: Backend::Exhaustive(table) }))
    }
}

fn write_tuple(buf: &mut Vec<u8>, t: &PermTuple) {
    for p in t.slots() {
        if p.degree() <= u8::MAX as usize {
            for i in 0..p.degree() {
                buf.push(p.apply(i) as u8);
            }
        } else {
            for i in 0..p.degree() {
                buf.extend_from_slice(&(p.apply(i) as u32).to_le_bytes());
            }
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> io::Result<&'a [u8]> {
        if self.at + n > self.buf.len() {
            return Err(io::Error::new(io::ErrorKind::UnexpectedEof, "truncated cache"));
        }
        let s = &self.buf[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }

    fn read_tuple(&mut self, shape: &[usize]) -> io::Result<PermTuple> {
        let mut parts = Vec::with_capacity(shape.len());
        for &d in shape {
            let images: Vec<usize> = if d <= u8::MAX as usize {
                self.take(d)?.iter().map(|&b| b as usize).collect()
            } else {
                self.take(4 * d)?.chunks_exact(4).map(|c| read_u32(c) as usize).collect()
            };
            let p = Perm::from_images0(&images)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
            parts.push(p);
        }
        Ok(PermTuple::new(parts))
    }
}

fn read_u32(b: &[u8]) -> u32 {
    u32::from_le_bytes(b.try_into().unwrap())
}

fn read_u64(b: &[u8]) -> u64 {
    u64::from_le_bytes(b.try_into().unwrap())
}

fn flat_degree(t: &PermTuple) -> usize {
    t.slots().iter().map(Perm::degree).sum()
}

fn commutator(a: &PermTuple, b: &PermTuple) -> PermTuple {
    a.compose(b).compose(&a.inverse()).compose(&b.inverse())
}

/// Order of the subgroup generated by `elements`, via a stabilizer chain.
pub fn subgroup_order(elements: &[PermTuple]) -> u64 {
    if elements.is_empty() {
        return 1;
    }
    let flats: Vec<Perm> = elements.iter().map(PermTuple::flatten).collect();
    let degree = flats[0].degree();
    let chain = StabChain::from_gens(degree, flats);
    u64::try_from(chain.order()).expect("subgroup order fits in u64")
}

/// Order of the group generated by `gens`, without enumeration.
pub fn group_order(gens: &[PermTuple]) -> u64 {
    subgroup_order(gens)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn log_exact(n: u64, p: u64) -> u32 {
    let e = log_of_p_part(n, p);
    debug_assert_eq!(n, p.pow(e), "count is an exact power of the prime");
    e
}

fn log_of_p_part(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_cycles;

    fn tuple(texts: &[(&str, usize)]) -> PermTuple {
        PermTuple::new(texts.iter().map(|&(t, d)| parse_cycles(t, d).unwrap()).collect())
    }

    fn sym_gens(images: Vec<PermTuple>) -> Vec<Generator> {
        let syms = [Sym::X12, Sym::X23, Sym::X13, Sym::X14, Sym::X24, Sym::X34];
        images
            .into_iter()
            .enumerate()
            .map(|(i, img)| Generator::of_sym(syms[i], img))
            .collect()
    }

    #[test]
    fn identity_generator_group() {
        let gens = vec![Generator::of_sym(Sym::X12, tuple(&[("()", 4)]))];
        let g = FinGroup::enumerate(gens.clone(), true, 100).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(FinGroup::via_chain(gens).order(), 1);
    }

    #[test]
    fn symmetric_group_s4() {
        let gens = sym_gens(vec![tuple(&[("(1,2)", 4)]), tuple(&[("(1,2,3,4)", 4)])]);
        let g = FinGroup::enumerate(gens.clone(), true, 100).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(FinGroup::via_chain(gens).order(), 24);
        // membership
        assert!(g.contains(&tuple(&[("(1,3)", 4)])));
        let chain = g.enumerated(false, 100).unwrap();
        assert!(chain.contains(&tuple(&[("(2,4,3)", 4)])));
    }

    #[test]
    fn chain_and_enumeration_agree_on_catalog() {
        let cases: Vec<Vec<PermTuple>> = vec![
            vec![tuple(&[("(1,2,3,4,5)", 5)]), tuple(&[("(1,2)", 5)])], // S5
            vec![tuple(&[("(1,2,3)", 5)]), tuple(&[("(3,4,5)", 5)])],   // A5
            vec![tuple(&[("(1,2)", 6), ("(1,2,3)", 3)])],               // C6 as a tuple group
            vec![tuple(&[("(1,2,3,4,5,6,7)", 7)]), tuple(&[("(2,3,5)", 7)])], // F21... actual order checked below
        ];
        for gens in cases {
            let gens: Vec<Generator> = gens.into_iter().map(Generator::unnamed).collect();
            let e = FinGroup::enumerate(gens.clone(), false, 1_000_000).unwrap();
            let c = FinGroup::via_chain(gens);
            assert_eq!(e.order(), c.order());
        }
    }

    #[test]
    fn cap_exceeded_reports() {
        let gens = sym_gens(vec![tuple(&[("(1,2)", 5)]), tuple(&[("(1,2,3,4,5)", 5)])]);
        match FinGroup::enumerate(gens, false, 10) {
            Err(Error::CapExceeded { cap: 10, reached }) => assert_eq!(reached, 10),
            other => panic!("expected cap error, got {:?}", other.map(|g| g.order())),
        }
    }

    #[test]
    fn witnesses_evaluate_to_their_elements() {
        let a = tuple(&[("(1,2,3,4)", 4)]);
        let b = tuple(&[("(1,2)", 4)]);
        let gens = vec![Generator::of_sym(Sym::X12, a.clone()), Generator::of_sym(Sym::X23, b.clone())];
        let g = FinGroup::enumerate(gens, true, 100).unwrap();
        let table = g.table().unwrap();
        for id in 0..table.len() as u32 {
            let w = g.witness_word(id);
            let mut acc = a.identity_like();
            for &(sym, exp) in w.letters() {
                let img = match sym {
                    Sym::X12 => &a,
                    Sym::X23 => &b,
                    _ => unreachable!(),
                };
                acc = acc.compose(&img.pow(exp));
            }
            assert_eq!(&acc, table.element(id), "witness {} for id {id}", w.display_f2());
        }
    }

    #[test]
    fn derived_subgroup_of_s4_is_a4_then_v4() {
        let gens = sym_gens(vec![tuple(&[("(1,2)", 4)]), tuple(&[("(1,2,3,4)", 4)])]);
        let s4 = FinGroup::enumerate(gens, true, 100).unwrap();
        let a4 = s4.derived_subgroup();
        assert_eq!(a4.order(), 12);
        let v4 = a4.derived_subgroup();
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.derived_subgroup().order(), 1);
        // normality: generator conjugates of derived generators are members
        for d in a4.gens() {
            for s in s4.gens() {
                let conj = s.image.inverse().compose(&d.image).compose(&s.image);
                assert!(a4.contains(&conj));
            }
        }
        // witnesses have zero exponent sums
        for d in a4.gens() {
            let w = d.word.as_ref().unwrap();
            assert_eq!(w.exponent_sum(Sym::X12), 0);
            assert_eq!(w.exponent_sum(Sym::X23), 0);
        }
    }

    #[test]
    fn derived_subgroup_of_cyclic_is_trivial() {
        let gens = sym_gens(vec![tuple(&[("(1,2,3,4,5,6)", 6)])]);
        let g = FinGroup::enumerate(gens, true, 100).unwrap();
        assert_eq!(g.derived_subgroup().order(), 1);
    }

    #[test]
    fn subgroup_order_lagrange() {
        let gens = sym_gens(vec![tuple(&[("(1,2)", 5)]), tuple(&[("(1,2,3,4,5)", 5)])]);
        let g = FinGroup::enumerate(gens.clone(), false, 1000).unwrap();
        let full: Vec<PermTuple> = gens.iter().map(|x| x.image.clone()).collect();
        assert_eq!(subgroup_order(&full), g.order());
        assert_eq!(subgroup_order(&[full[0].clone()]), 2);
        assert_eq!(subgroup_order(&[g.table().unwrap().element(0).clone()]), 1);
        for sub in [&full[..1], &full[..2]] {
            assert_eq!(g.order() % subgroup_order(sub), 0);
        }
    }

    #[test]
    fn abelian_invariants_examples() {
        // C6 = C2 x C3
        let c6 = FinGroup::enumerate(
            sym_gens(vec![tuple(&[("(1,2)", 5), ("(3,4,5)", 5)])]),
            false,
            100,
        )
        .unwrap();
        assert_eq!(c6.abelian_invariants().unwrap(), vec![2, 3]);
        // C9 x C9 (two commuting 9-cycles on disjoint slots)
        let g = FinGroup::enumerate(
            sym_gens(vec![
                tuple(&[("(1,2,3,4,5,6,7,8,9)", 9), ("()", 9)]),
                tuple(&[("()", 9), ("(1,2,3,4,5,6,7,8,9)", 9)]),
            ]),
            false,
            1000,
        )
        .unwrap();
        assert_eq!(g.abelian_invariants().unwrap(), vec![9, 9]);
        // trivial group
        let t = FinGroup::enumerate(sym_gens(vec![tuple(&[("()", 3)])]), false, 10).unwrap();
        assert_eq!(t.abelian_invariants().unwrap(), Vec::<u64>::new());
        // non-abelian rejected
        let s3 = FinGroup::enumerate(
            sym_gens(vec![tuple(&[("(1,2)", 3)]), tuple(&[("(1,2,3)", 3)])]),
            false,
            100,
        )
        .unwrap();
        assert!(s3.abelian_invariants().is_err());
    }

    #[test]
    fn presentation_matching() {
        use crate::parse_word;
        // S3 = D3 = <r, s | r^3, s^2, (rs)^2>
        let s3 = FinGroup::enumerate(
            sym_gens(vec![tuple(&[("(1,2)", 3)]), tuple(&[("(1,2,3)", 3)])]),
            false,
            100,
        )
        .unwrap();
        let relators = vec![
            parse_word("x^3").unwrap(),
            parse_word("y^2").unwrap(),
            parse_word("x y x y").unwrap(),
        ];
        let hit = s3.match_presentation(2, &relators).unwrap();
        assert!(hit.is_some());
        // trivial group matches <r | r>
        let t = FinGroup::enumerate(sym_gens(vec![tuple(&[("()", 2)])]), false, 10).unwrap();
        assert!(t.match_presentation(1, &[parse_word("x").unwrap()]).unwrap().is_some());
        // C3 does not match <r, s | r^2, s^2, (rs)^2>
        let c3 = FinGroup::enumerate(sym_gens(vec![tuple(&[("(1,2,3)", 3)])]), false, 10).unwrap();
        let relators = vec![
            parse_word("x^2").unwrap(),
            parse_word("y^2").unwrap(),
            parse_word("x y x y").unwrap(),
        ];
        assert!(c3.match_presentation(2, &relators).unwrap().is_none());
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let gens = sym_gens(vec![tuple(&[("(1,2,3,4)", 4)]), tuple(&[("(1,2)", 4)])]);
        let g = FinGroup::enumerate(gens.clone(), true, 100).unwrap();
        let path = dir.path().join(format!("{}.gtsf", g.cache_key()));
        g.write_cache(&path).unwrap();
        let loaded = FinGroup::read_cache(&path, gens.clone()).unwrap().unwrap();
        assert_eq!(loaded.order(), g.order());
        for id in 0..g.order() as u32 {
            assert_eq!(loaded.table().unwrap().element(id), g.table().unwrap().element(id));
            assert_eq!(loaded.witness_word(id), g.witness_word(id));
        }
        // mismatched generators are rejected
        let other = sym_gens(vec![tuple(&[("(1,3,2,4)", 4)]), tuple(&[("(1,2)", 4)])]);
        assert!(FinGroup::read_cache(&path, other).unwrap().is_none());
        // missing file
        assert!(FinGroup::read_cache(&dir.path().join("nope.gtsf"), gens).unwrap().is_none());
    }
}
