//! Finite group backends and exact detection probability.
//!
//! A [`FiniteGroup`] is a concrete finite group with a generator assignment:
//! products of cyclic groups (`zmr`), permutation groups given by generators
//! (`perm`), and direct products. Elements are interned into a Cayley table,
//! so subgroup enumeration and membership counting are table lookups.
//!
//! The detection probability of a tuple `A` is
//! `min over maximal H < G of 1 - |A ∩ H| / |A|` (the same value as the
//! infimum over all proper subgroups). For abelian backends the maximal
//! subgroups are enumerated as kernels of functionals to prime cyclic
//! quotients; otherwise the full subgroup lattice is built by join closure
//! of cyclic subgroups.

use crate::error::{Error, Result};
use crate::words::{Word, WordSet};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::OnceLock;

/// JSON-facing element encoding. Permutations use 1-based image lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRepr {
    Tuple(Vec<u64>),
    Pair { left: Box<ElementRepr>, right: Box<ElementRepr> },
}

/// Group description, the on-disk backend format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Zmr {
        m: u64,
        r: usize,
        generators: Vec<ElementRepr>,
    },
    Perm {
        degree: usize,
        generators: Vec<ElementRepr>,
    },
    Product {
        left: Box<GroupSpec>,
        right: Box<GroupSpec>,
        generators: Vec<ElementRepr>,
    },
}

/// Internal element value. Tuples hold mod-m coordinates (zmr) or 0-based
/// permutation images (perm).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Tuple(Vec<u32>),
    Pair(Box<Element>, Box<Element>),
}

#[derive(Clone, Debug)]
enum Kind {
    Zmr { m: u64, r: usize },
    Perm { degree: usize },
    Product(Box<Kind>, Box<Kind>),
}

impl Kind {
    fn identity(&self) -> Element {
        match self {
            Kind::Zmr { r, .. } => Element::Tuple(vec![0; *r]),
            Kind::Perm { degree } => Element::Tuple((0..*degree as u32).collect()),
            Kind::Product(a, b) => {
                Element::Pair(Box::new(a.identity()), Box::new(b.identity()))
            }
        }
    }

    /// Group product; permutations compose left-to-right (apply `a`, then `b`).
    fn mul(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Kind::Zmr { m, .. }, Element::Tuple(x), Element::Tuple(y)) => Element::Tuple(
                x.iter()
                    .zip(y)
                    .map(|(&u, &v)| ((u as u64 + v as u64) % m) as u32)
                    .collect(),
            ),
            (Kind::Perm { .. }, Element::Tuple(x), Element::Tuple(y)) => {
                Element::Tuple(x.iter().map(|&i| y[i as usize]).collect())
            }
            (Kind::Product(ka, kb), Element::Pair(xa, xb), Element::Pair(ya, yb)) => {
                Element::Pair(Box::new(ka.mul(xa, ya)), Box::new(kb.mul(xb, yb)))
            }
            _ => unreachable!("element shape does not match group kind"),
        }
    }

    fn inv(&self, a: &Element) -> Element {
        match (self, a) {
            (Kind::Zmr { m, .. }, Element::Tuple(x)) => {
                Element::Tuple(x.iter().map(|&u| ((m - u as u64) % m) as u32).collect())
            }
            (Kind::Perm { degree }, Element::Tuple(x)) => {
                let mut inv = vec![0u32; *degree];
                for (i, &img) in x.iter().enumerate() {
                    inv[img as usize] = i as u32;
                }
                Element::Tuple(inv)
            }
            (Kind::Product(ka, kb), Element::Pair(xa, xb)) => {
                Element::Pair(Box::new(ka.inv(xa)), Box::new(kb.inv(xb)))
            }
            _ => unreachable!("element shape does not match group kind"),
        }
    }

    fn element_from_repr(&self, repr: &ElementRepr) -> Result<Element> {
        match (self, repr) {
            (Kind::Zmr { m, r }, ElementRepr::Tuple(v)) => {
                if v.len() != *r {
                    return Err(Error::SizeMismatch {
                        what: "zmr element coordinates",
                        expected: *r,
                        got: v.len(),
                    });
                }
                Ok(Element::Tuple(v.iter().map(|&x| (x % m) as u32).collect()))
            }
            (Kind::Perm { degree }, ElementRepr::Tuple(v)) => {
                if v.len() != *degree {
                    return Err(Error::SizeMismatch {
                        what: "permutation image list",
                        expected: *degree,
                        got: v.len(),
                    });
                }
                let mut seen = vec![false; *degree];
                let mut images = Vec::with_capacity(*degree);
                for &x in v {
                    if x == 0 || x as usize > *degree || seen[(x - 1) as usize] {
                        return Err(Error::InvalidParams(format!(
                            "not a permutation of 1..{degree}: {v:?}"
                        )));
                    }
                    seen[(x - 1) as usize] = true;
                    images.push((x - 1) as u32);
                }
                Ok(Element::Tuple(images))
            }
            (Kind::Product(ka, kb), ElementRepr::Pair { left, right }) => Ok(Element::Pair(
                Box::new(ka.element_from_repr(left)?),
                Box::new(kb.element_from_repr(right)?),
            )),
            _ => Err(Error::InvalidParams(
                "element encoding does not match group kind".into(),
            )),
        }
    }

    fn element_to_repr(&self, e: &Element) -> ElementRepr {
        match (self, e) {
            (Kind::Zmr { .. }, Element::Tuple(v)) => {
                ElementRepr::Tuple(v.iter().map(|&x| x as u64).collect())
            }
            (Kind::Perm { .. }, Element::Tuple(v)) => {
                ElementRepr::Tuple(v.iter().map(|&x| x as u64 + 1).collect())
            }
            (Kind::Product(ka, kb), Element::Pair(a, b)) => ElementRepr::Pair {
                left: Box::new(ka.element_to_repr(a)),
                right: Box::new(kb.element_to_repr(b)),
            },
            _ => unreachable!(),
        }
    }

    /// For all-zmr kinds, the list of cyclic components `(m, r)`.
    fn zmr_components(&self) -> Option<Vec<(u64, usize)>> {
        match self {
            Kind::Zmr { m, r } => Some(vec![(*m, *r)]),
            Kind::Perm { .. } => None,
            Kind::Product(a, b) => {
                let mut v = a.zmr_components()?;
                v.extend(b.zmr_components()?);
                Some(v)
            }
        }
    }

    /// Flatten an element's coordinates mod p over components whose modulus
    /// is divisible by p. Only valid for all-zmr kinds.
    fn coords_mod_p(&self, e: &Element, p: u64, out: &mut Vec<u64>) {
        match (self, e) {
            (Kind::Zmr { m, .. }, Element::Tuple(v)) => {
                if m % p == 0 {
                    out.extend(v.iter().map(|&x| x as u64 % p));
                }
            }
            (Kind::Product(ka, kb), Element::Pair(a, b)) => {
                ka.coords_mod_p(a, p, out);
                kb.coords_mod_p(b, p, out);
            }
            _ => unreachable!(),
        }
    }
}

/// Enumeration caps; defaults match desk-scale workloads.
#[derive(Clone, Debug)]
pub struct GroupCaps {
    pub max_order: usize,
    pub max_subgroups: usize,
    pub max_functionals: u64,
}

impl Default for GroupCaps {
    fn default() -> Self {
        GroupCaps {
            max_order: 2000,
            max_subgroups: 50_000,
            max_functionals: 10_000_000,
        }
    }
}

/// A finite group with interned elements, a Cayley table, and a generator
/// assignment. Element index 0 is the identity.
pub struct FiniteGroup {
    spec: GroupSpec,
    kind: Kind,
    caps: GroupCaps,
    elems: Vec<Element>,
    index: HashMap<Element, u32>,
    table: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<u32>,
    lattice: OnceLock<SubgroupLattice>,
}

impl FiniteGroup {
    pub fn from_spec(spec: &GroupSpec, caps: GroupCaps) -> Result<Self> {
        let kind = Self::kind_of(spec);
        let gen_reprs = match spec {
            GroupSpec::Zmr { generators, .. }
            | GroupSpec::Perm { generators, .. }
            | GroupSpec::Product { generators, .. } => generators,
        };
        let gens: Vec<Element> = gen_reprs
            .iter()
            .map(|r| kind.element_from_repr(r))
            .collect::<Result<_>>()?;
        if gens.is_empty() {
            return Err(Error::InvalidParams("generator tuple must be nonempty".into()));
        }

        let elems = Self::enumerate_elements(spec, &kind, &gens, &caps)?;
        let order = elems.len();
        let mut index = HashMap::with_capacity(order);
        for (i, e) in elems.iter().enumerate() {
            index.insert(e.clone(), i as u32);
        }

        let mut table = vec![0u32; order * order];
        for i in 0..order {
            for j in 0..order {
                let prod = kind.mul(&elems[i], &elems[j]);
                table[i * order + j] = *index
                    .get(&prod)
                    .expect("group not closed under multiplication");
            }
        }
        let inv: Vec<u32> = (0..order)
            .map(|i| *index.get(&kind.inv(&elems[i])).expect("inverse missing"))
            .collect();

        let generators: Vec<u32> = gens
            .iter()
            .map(|g| {
                index
                    .get(g)
                    .copied()
                    .ok_or_else(|| Error::InvalidParams("generator outside group".into()))
            })
            .collect::<Result<_>>()?;

        let g = FiniteGroup {
            spec: spec.clone(),
            kind,
            caps,
            elems,
            index,
            table,
            inv,
            generators,
            lattice: OnceLock::new(),
        };

        // generators must generate the declared ambient group
        let closure = g.closure(&g.generators);
        let closure_size = bitset_count(&closure);
        if closure_size != order {
            return Err(Error::NonGenerating { closure: closure_size, order });
        }
        Ok(g)
    }

    fn kind_of(spec: &GroupSpec) -> Kind {
        match spec {
            GroupSpec::Zmr { m, r, .. } => Kind::Zmr { m: *m, r: *r },
            GroupSpec::Perm { degree, .. } => Kind::Perm { degree: *degree },
            GroupSpec::Product { left, right, .. } => Kind::Product(
                Box::new(Self::kind_of(left)),
                Box::new(Self::kind_of(right)),
            ),
        }
    }

    fn enumerate_elements(
        spec: &GroupSpec,
        kind: &Kind,
        gens: &[Element],
        caps: &GroupCaps,
    ) -> Result<Vec<Element>> {
        match spec {
            GroupSpec::Zmr { m, r, .. } => {
                if *m < 1 {
                    return Err(Error::InvalidParams("modulus must be >= 1".into()));
                }
                let order = (*m as u128).checked_pow(*r as u32).unwrap_or(u128::MAX);
                if order > caps.max_order as u128 {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        needed: order,
                        cap: caps.max_order as u128,
                    });
                }
                let mut elems = Vec::with_capacity(order as usize);
                let mut cur = vec![0u32; *r];
                loop {
                    elems.push(Element::Tuple(cur.clone()));
                    // odometer, last coordinate fastest
                    let mut pos = *r;
                    loop {
                        if pos == 0 {
                            return Ok(elems);
                        }
                        pos -= 1;
                        cur[pos] += 1;
                        if (cur[pos] as u64) < *m {
                            break;
                        }
                        cur[pos] = 0;
                    }
                }
            }
            GroupSpec::Perm { .. } => {
                // ambient group = closure of the generators
                let mut elems = vec![kind.identity()];
                let mut seen: HashMap<Element, ()> = HashMap::new();
                seen.insert(elems[0].clone(), ());
                let mut qi = 0;
                while qi < elems.len() {
                    let x = elems[qi].clone();
                    qi += 1;
                    for g in gens {
                        let y = kind.mul(&x, g);
                        if !seen.contains_key(&y) {
                            if elems.len() >= caps.max_order {
                                return Err(Error::CapExceeded {
                                    what: "group order",
                                    needed: (elems.len() + 1) as u128,
                                    cap: caps.max_order as u128,
                                });
                            }
                            seen.insert(y.clone(), ());
                            elems.push(y);
                        }
                    }
                }
                Ok(elems)
            }
            GroupSpec::Product { left, right, .. } => {
                let (ka, kb) = match kind {
                    Kind::Product(a, b) => (a, b),
                    _ => unreachable!(),
                };
                let left_gens = Self::component_generators(left, ka)?;
                let right_gens = Self::component_generators(right, kb)?;
                let ea = Self::enumerate_elements(left, ka, &left_gens, caps)?;
                let eb = Self::enumerate_elements(right, kb, &right_gens, caps)?;
                let order = (ea.len() as u128) * (eb.len() as u128);
                if order > caps.max_order as u128 {
                    return Err(Error::CapExceeded {
                        what: "group order",
                        needed: order,
                        cap: caps.max_order as u128,
                    });
                }
                let mut elems = Vec::with_capacity(order as usize);
                for a in &ea {
                    for b in &eb {
                        elems.push(Element::Pair(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
                Ok(elems)
            }
        }
    }

    fn component_generators(spec: &GroupSpec, kind: &Kind) -> Result<Vec<Element>> {
        let reprs = match spec {
            GroupSpec::Zmr { generators, .. }
            | GroupSpec::Perm { generators, .. }
            | GroupSpec::Product { generators, .. } => generators,
        };
        reprs.iter().map(|r| kind.element_from_repr(r)).collect()
    }

    // ---- convenience constructors -------------------------------------

    /// Z_m with generator 1.
    pub fn cyclic(m: u64) -> Result<Self> {
        Self::zmr(m, 1)
    }

    /// Z_m^r with the standard basis as generators.
    pub fn zmr(m: u64, r: usize) -> Result<Self> {
        let generators = (0..r)
            .map(|i| {
                let mut v = vec![0u64; r];
                v[i] = 1 % m;
                ElementRepr::Tuple(v)
            })
            .collect();
        Self::from_spec(&GroupSpec::Zmr { m, r, generators }, GroupCaps::default())
    }

    /// Permutation group generated by the given 1-based image lists.
    pub fn perm(degree: usize, gens: &[Vec<u64>]) -> Result<Self> {
        let generators = gens.iter().map(|g| ElementRepr::Tuple(g.clone())).collect();
        Self::from_spec(&GroupSpec::Perm { degree, generators }, GroupCaps::default())
    }

    /// S_n generated by (1 2) and (1 2 ... n).
    pub fn symmetric(n: usize) -> Result<Self> {
        let mut transposition: Vec<u64> = (1..=n as u64).collect();
        transposition.swap(0, 1);
        let cycle: Vec<u64> = (1..=n as u64).map(|i| i % n as u64 + 1).collect();
        if n == 2 {
            return Self::perm(2, &[transposition]);
        }
        Self::perm(n, &[transposition, cycle])
    }

    /// Direct product with the component generators embedded on each side.
    pub fn product(a: &GroupSpec, b: &GroupSpec) -> Result<Self> {
        let ka = Self::kind_of(a);
        let kb = Self::kind_of(b);
        let ga = Self::component_generators(a, &ka)?;
        let gb = Self::component_generators(b, &kb)?;
        let id_a = ka.element_to_repr(&ka.identity());
        let id_b = kb.element_to_repr(&kb.identity());
        let mut generators = Vec::new();
        for g in &ga {
            generators.push(ElementRepr::Pair {
                left: Box::new(ka.element_to_repr(g)),
                right: Box::new(id_b.clone()),
            });
        }
        for h in &gb {
            generators.push(ElementRepr::Pair {
                left: Box::new(id_a.clone()),
                right: Box::new(kb.element_to_repr(h)),
            });
        }
        Self::from_spec(
            &GroupSpec::Product {
                left: Box::new(a.clone()),
                right: Box::new(b.clone()),
                generators,
            },
            GroupCaps::default(),
        )
    }

    // ---- basic accessors ----------------------------------------------

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Number of generators in the assignment (the rank words evaluate under).
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn identity(&self) -> &Element {
        &self.elems[0]
    }

    pub fn element(&self, idx: u32) -> &Element {
        &self.elems[idx as usize]
    }

    pub fn element_index(&self, e: &Element) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn element_repr(&self, e: &Element) -> ElementRepr {
        self.kind.element_to_repr(e)
    }

    pub fn element_from_repr(&self, r: &ElementRepr) -> Result<Element> {
        self.kind.element_from_repr(r)
    }

    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.elems.len() + b as usize]
    }

    pub fn inv_idx(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn is_abelian(&self) -> bool {
        for &a in &self.generators {
            for &b in &self.generators {
                if self.mul_idx(a, b) != self.mul_idx(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Short human-readable description for reports.
    pub fn describe(&self) -> String {
        fn spec_desc(spec: &GroupSpec) -> String {
            match spec {
                GroupSpec::Zmr { m, r, .. } => format!("Z_{m}^{r}"),
                GroupSpec::Perm { degree, .. } => format!("perm(deg={degree})"),
                GroupSpec::Product { left, right, .. } => {
                    format!("{} x {}", spec_desc(left), spec_desc(right))
                }
            }
        }
        format!("{} (order {}, {} gens)", spec_desc(&self.spec), self.order(), self.generator_count())
    }

    // ---- word evaluation ------------------------------------------------

    /// Evaluate a word at the group's generator assignment: the left-to-right
    /// product of `g_{|letter|}^{sign(letter)}`; the empty word is the identity.
    pub fn evaluate(&self, w: &Word) -> Result<Element> {
        let mut acc = 0u32;
        for &l in w.letters() {
            let idx = l.unsigned_abs() as usize;
            if idx == 0 || idx > self.generators.len() {
                return Err(Error::LetterOutOfRange {
                    letter: l,
                    rank: self.generators.len(),
                });
            }
            let mut g = self.generators[idx - 1];
            if l < 0 {
                g = self.inv_idx(g);
            }
            acc = self.mul_idx(acc, g);
        }
        Ok(self.elems[acc as usize].clone())
    }

    pub fn evaluate_set(&self, ws: &WordSet) -> Result<Vec<Element>> {
        ws.words.iter().map(|w| self.evaluate(w)).collect()
    }

    /// Evaluate a word at an arbitrary assignment tuple instead of the
    /// group's own generators.
    pub fn evaluate_at(&self, w: &Word, assignment: &[Element]) -> Result<Element> {
        let idxs = self.element_indices(assignment)?;
        let mut acc = 0u32;
        for &l in w.letters() {
            let pos = l.unsigned_abs() as usize;
            if pos == 0 || pos > idxs.len() {
                return Err(Error::LetterOutOfRange { letter: l, rank: idxs.len() });
            }
            let mut g = idxs[pos - 1];
            if l < 0 {
                g = self.inv_idx(g);
            }
            acc = self.mul_idx(acc, g);
        }
        Ok(self.elems[acc as usize].clone())
    }

    /// Whether the given elements generate the whole group.
    pub fn generates(&self, elements: &[Element]) -> Result<bool> {
        let idxs = self.element_indices(elements)?;
        Ok(bitset_count(&self.closure(&idxs)) == self.order())
    }

    fn element_indices(&self, elements: &[Element]) -> Result<Vec<u32>> {
        elements
            .iter()
            .map(|e| {
                self.element_index(e)
                    .ok_or_else(|| Error::InvalidParams("element not in group".into()))
            })
            .collect()
    }

    // ---- closure and lattice ---------------------------------------------

    /// Bitset of the subgroup generated by the given element indices.
    fn closure(&self, seed: &[u32]) -> Vec<u64> {
        let order = self.elems.len();
        let mut bs = vec![0u64; order.div_ceil(64)];
        let mut members: Vec<u32> = Vec::new();
        let push = |bs: &mut Vec<u64>, members: &mut Vec<u32>, x: u32| {
            if !bitset_get(bs, x) {
                bitset_set(bs, x);
                members.push(x);
            }
        };
        push(&mut bs, &mut members, 0);
        for &s in seed {
            push(&mut bs, &mut members, s);
        }
        let mut qi = 0;
        while qi < members.len() {
            let x = members[qi];
            qi += 1;
            let mut j = 0;
            while j < members.len() {
                let y = members[j];
                j += 1;
                let xy = self.mul_idx(x, y);
                push(&mut bs, &mut members, xy);
                let yx = self.mul_idx(y, x);
                push(&mut bs, &mut members, yx);
            }
        }
        bs
    }

    /// All subgroups by cyclic seeding and pairwise join closure, with
    /// maximal subgroups marked. Cached after first computation.
    pub fn subgroup_lattice(&self) -> Result<&SubgroupLattice> {
        if let Some(l) = self.lattice.get() {
            return Ok(l);
        }
        let l = self.build_lattice()?;
        Ok(self.lattice.get_or_init(|| l))
    }

    fn build_lattice(&self) -> Result<SubgroupLattice> {
        let order = self.elems.len();
        let mut by_key: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut subs: Vec<Vec<u64>> = Vec::new();

        let insert = |subs: &mut Vec<Vec<u64>>,
                          by_key: &mut HashMap<Vec<u64>, usize>,
                          bs: Vec<u64>|
         -> bool {
            if by_key.contains_key(&bs) {
                false
            } else {
                by_key.insert(bs.clone(), subs.len());
                subs.push(bs);
                true
            }
        };

        for i in 0..order as u32 {
            let bs = self.closure(&[i]);
            insert(&mut subs, &mut by_key, bs);
        }

        let mut joined_upto = 0usize;
        loop {
            let cur = subs.len();
            if cur > self.caps.max_subgroups {
                return Err(Error::CapExceeded {
                    what: "subgroup lattice",
                    needed: cur as u128,
                    cap: self.caps.max_subgroups as u128,
                });
            }
            let mut added = false;
            for i in 0..cur {
                let j0 = if i < joined_upto { joined_upto } else { i + 1 };
                for j in j0..cur {
                    if bitset_subset(&subs[i], &subs[j]) || bitset_subset(&subs[j], &subs[i]) {
                        continue;
                    }
                    let mut seed: Vec<u32> = bitset_members(&subs[i]);
                    seed.extend(bitset_members(&subs[j]));
                    let join = self.closure(&seed);
                    if insert(&mut subs, &mut by_key, join) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
            joined_upto = cur;
        }

        let mut entries: Vec<Subgroup> = subs
            .into_iter()
            .map(|bs| {
                let members = bitset_members(&bs);
                Subgroup { order: members.len(), members, bitset: bs }
            })
            .collect();
        entries.sort_by(|a, b| (a.order, &a.members).cmp(&(b.order, &b.members)));

        let full = entries.len() - 1; // unique subgroup of full order, sorted last
        debug_assert_eq!(entries[full].order, order);
        let mut maximal = Vec::new();
        for i in 0..entries.len() {
            if entries[i].order == order {
                continue;
            }
            let mut is_max = true;
            for j in 0..entries.len() {
                if j == i || entries[j].order == order || entries[j].order <= entries[i].order {
                    continue;
                }
                if bitset_subset(&entries[i].bitset, &entries[j].bitset) {
                    is_max = false;
                    break;
                }
            }
            if is_max {
                maximal.push(i);
            }
        }
        Ok(SubgroupLattice { group_order: order, subgroups: entries, maximal })
    }

    // ---- exact detection probability --------------------------------------

    /// Exact detection probability of an element tuple: the minimum over
    /// maximal subgroups of the fraction of the tuple outside the subgroup.
    /// Multiset counting; the trivial group has no proper subgroups and gets 1.
    pub fn exact_delta(&self, elements: &[Element]) -> Result<Ratio<u64>> {
        if elements.is_empty() {
            return Err(Error::InvalidParams("empty tuple".into()));
        }
        if self.order() == 1 {
            return Ok(Ratio::new(1, 1));
        }
        let idxs = self.element_indices(elements)?;
        if let Some(components) = self.kind.zmr_components() {
            self.exact_delta_abelian(&idxs, &components)
        } else {
            self.exact_delta_lattice(&idxs)
        }
    }

    pub fn exact_delta_words(&self, ws: &WordSet) -> Result<Ratio<u64>> {
        let elems = self.evaluate_set(ws)?;
        self.exact_delta(&elems)
    }

    fn exact_delta_abelian(
        &self,
        idxs: &[u32],
        components: &[(u64, usize)],
    ) -> Result<Ratio<u64>> {
        let n = idxs.len() as u64;
        let mut primes: Vec<u64> = Vec::new();
        for &(m, _) in components {
            for p in prime_factors(m) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort_unstable();

        let mut best: Option<Ratio<u64>> = None;
        for p in primes {
            // coordinates of each tuple element in G/pG
            let coords: Vec<Vec<u64>> = idxs
                .iter()
                .map(|&i| {
                    let mut v = Vec::new();
                    self.kind.coords_mod_p(&self.elems[i as usize], p, &mut v);
                    v
                })
                .collect();
            let r = coords[0].len();
            if r == 0 {
                continue;
            }
            let total = functional_count(p, r);
            if total > self.caps.max_functionals as u128 {
                return Err(Error::CapExceeded {
                    what: "functional enumeration",
                    needed: total,
                    cap: self.caps.max_functionals as u128,
                });
            }
            for_each_normalized_functional(p, r, |alpha| {
                let outside = coords
                    .iter()
                    .filter(|c| {
                        let dot: u64 = c.iter().zip(alpha).map(|(&x, &a)| x * a % p).sum::<u64>() % p;
                        dot != 0
                    })
                    .count() as u64;
                let delta = Ratio::new(outside, n);
                if best.is_none_or(|b| delta < b) {
                    best = Some(delta);
                }
            });
        }
        best.ok_or_else(|| Error::InvalidParams("group has no maximal subgroups".into()))
    }

    fn exact_delta_lattice(&self, idxs: &[u32]) -> Result<Ratio<u64>> {
        let lattice = self.subgroup_lattice()?;
        let n = idxs.len() as u64;
        let mut best = Ratio::new(1, 1);
        for &mi in &lattice.maximal {
            let h = &lattice.subgroups[mi];
            let inside = idxs.iter().filter(|&&i| bitset_get(&h.bitset, i)).count() as u64;
            let delta = Ratio::new(n - inside, n);
            if delta < best {
                best = delta;
            }
        }
        Ok(best)
    }

    /// Detection probability minimised over all proper subgroups (oracle for
    /// the claim that maximal subgroups suffice).
    pub fn exact_delta_all_proper(&self, elements: &[Element]) -> Result<Ratio<u64>> {
        if self.order() == 1 {
            return Ok(Ratio::new(1, 1));
        }
        let idxs = self.element_indices(elements)?;
        let lattice = self.subgroup_lattice()?;
        let n = idxs.len() as u64;
        let mut best = Ratio::new(1, 1);
        for h in &lattice.subgroups {
            if h.order == self.order() {
                continue;
            }
            let inside = idxs.iter().filter(|&&i| bitset_get(&h.bitset, i)).count() as u64;
            let delta = Ratio::new(n - inside, n);
            if delta < best {
                best = delta;
            }
        }
        Ok(best)
    }

    // ---- solvability ------------------------------------------------------

    /// Orders along the derived series, starting with |G|.
    pub fn derived_series(&self) -> Vec<usize> {
        let order = self.elems.len();
        let mut series = vec![order];
        let mut current: Vec<u32> = (0..order as u32).collect();
        loop {
            let mut commutators: Vec<u32> = Vec::new();
            for &a in &current {
                for &b in &current {
                    let c = self.mul_idx(
                        self.mul_idx(self.inv_idx(a), self.inv_idx(b)),
                        self.mul_idx(a, b),
                    );
                    commutators.push(c);
                }
            }
            commutators.sort_unstable();
            commutators.dedup();
            let bs = self.closure(&commutators);
            let next = bitset_members(&bs);
            if next.len() == *series.last().unwrap() {
                break;
            }
            series.push(next.len());
            current = next;
            if *series.last().unwrap() == 1 {
                break;
            }
        }
        series
    }

    pub fn is_solvable(&self) -> bool {
        *self.derived_series().last().unwrap() == 1
    }

    /// Smallest generating-tuple size, by brute force over small tuples.
    pub fn rank_brute_force(&self, max_k: usize) -> Option<usize> {
        let order = self.elems.len();
        if order == 1 {
            return Some(0);
        }
        let mut tuple = Vec::new();
        for k in 1..=max_k {
            tuple.clear();
            if self.search_generating_tuple(k, 1, &mut tuple) {
                return Some(k);
            }
        }
        None
    }

    fn search_generating_tuple(&self, k: usize, start: u32, tuple: &mut Vec<u32>) -> bool {
        if tuple.len() == k {
            let bs = self.closure(tuple);
            return bitset_count(&bs) == self.elems.len();
        }
        for i in start..self.elems.len() as u32 {
            tuple.push(i);
            if self.search_generating_tuple(k, i + 1, tuple) {
                return true;
            }
            tuple.pop();
        }
        false
    }
}

/// The full subgroup lattice of a finite group.
pub struct SubgroupLattice {
    pub group_order: usize,
    pub subgroups: Vec<Subgroup>,
    /// Indices into `subgroups` of the maximal proper subgroups.
    pub maximal: Vec<usize>,
}

pub struct Subgroup {
    pub members: Vec<u32>,
    pub bitset: Vec<u64>,
    pub order: usize,
}

impl Subgroup {
    pub fn contains(&self, idx: u32) -> bool {
        bitset_get(&self.bitset, idx)
    }
}

// ---- vector-space fast path -----------------------------------------------

/// Exact detection probability of a word set in the mod-p abelianized
/// quotient, by enumerating functionals up to scalar: the minimum over
/// nonzero functionals of the fraction of words pairing nonzero.
pub fn exact_delta_vector_space(
    ws: &WordSet,
    p: u64,
    budget: u64,
) -> Result<Ratio<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let k = ws.rank;
    let n = ws.words.len() as u64;
    let total = functional_count(p, k);
    if total > budget as u128 {
        return Err(Error::CapExceeded {
            what: "functional enumeration",
            needed: total,
            cap: budget as u128,
        });
    }

    if p == 2 && k <= 64 {
        let masks = ws.parity_masks()?;
        let mut best = n;
        for alpha in 1u64..(1u64 << k) {
            let outside = masks
                .iter()
                .filter(|&&m| (m & alpha).count_ones() % 2 == 1)
                .count() as u64;
            if outside < best {
                best = outside;
                if best == 0 {
                    break;
                }
            }
        }
        return Ok(Ratio::new(best, n));
    }

    let vectors: Vec<Vec<u64>> = ws
        .words
        .iter()
        .map(|w| {
            w.exponent_sums(k)
                .iter()
                .map(|&s| s.rem_euclid(p as i64) as u64)
                .collect()
        })
        .collect();
    let mut best = n;
    for_each_normalized_functional(p, k, |alpha| {
        let outside = vectors
            .iter()
            .filter(|v| {
                let dot: u64 = v.iter().zip(alpha).map(|(&x, &a)| x * a % p).sum::<u64>() % p;
                dot != 0
            })
            .count() as u64;
        if outside < best {
            best = outside;
        }
    });
    Ok(Ratio::new(best, n))
}

/// Sampled upper-bound evidence for the mod-p quotient detection probability:
/// the minimum outside-fraction over randomly drawn nonzero functionals.
/// Not a certificate; every sampled functional only caps the true value.
pub fn sampled_delta_vector_space(
    ws: &WordSet,
    p: u64,
    trials: u64,
    seed: u64,
) -> Result<Ratio<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let k = ws.rank;
    let n = ws.words.len() as u64;
    let vectors: Vec<Vec<u64>> = ws
        .words
        .iter()
        .map(|w| {
            w.exponent_sums(k)
                .iter()
                .map(|&s| s.rem_euclid(p as i64) as u64)
                .collect()
        })
        .collect();
    let mut rng = crate::rng::substream(seed, "vector-space-delta/sampled");
    let mut best = n;
    for _ in 0..trials {
        let alpha: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        if alpha.iter().all(|&a| a == 0) {
            continue;
        }
        let outside = vectors
            .iter()
            .filter(|v| {
                let dot: u64 = v.iter().zip(&alpha).map(|(&x, &a)| x * a % p).sum::<u64>() % p;
                dot != 0
            })
            .count() as u64;
        best = best.min(outside);
    }
    Ok(Ratio::new(best, n))
}

// ---- homomorphisms ----------------------------------------------------------

/// A verified epimorphism between two backends, given by generator images.
pub struct Homomorphism<'a> {
    pub from: &'a FiniteGroup,
    pub to: &'a FiniteGroup,
    map: Vec<u32>,
}

impl<'a> Homomorphism<'a> {
    /// Build the map from images of `from`'s generators and verify
    /// `phi(ab) = phi(a)phi(b)` on every pair, and surjectivity.
    pub fn from_generator_images(
        from: &'a FiniteGroup,
        to: &'a FiniteGroup,
        images: &[Element],
    ) -> Result<Self> {
        if images.len() != from.generator_count() {
            return Err(Error::SizeMismatch {
                what: "generator images",
                expected: from.generator_count(),
                got: images.len(),
            });
        }
        let image_idx: Vec<u32> = images
            .iter()
            .map(|e| {
                to.element_index(e)
                    .ok_or_else(|| Error::InvalidHomomorphism("image not in codomain".into()))
            })
            .collect::<Result<_>>()?;

        let order = from.order();
        let mut map = vec![u32::MAX; order];
        map[0] = 0;
        let mut queue = vec![0u32];
        let mut qi = 0;
        while qi < queue.len() {
            let x = queue[qi];
            qi += 1;
            for (gi, &g) in from.generators.iter().enumerate() {
                let y = from.mul_idx(x, g);
                let img = to.mul_idx(map[x as usize], image_idx[gi]);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = img;
                    queue.push(y);
                } else if map[y as usize] != img {
                    return Err(Error::InvalidHomomorphism(
                        "inconsistent images along generator paths".into(),
                    ));
                }
            }
        }
        for a in 0..order as u32 {
            for b in 0..order as u32 {
                let ab = from.mul_idx(a, b);
                if map[ab as usize] != to.mul_idx(map[a as usize], map[b as usize]) {
                    return Err(Error::InvalidHomomorphism(
                        "multiplicativity fails".into(),
                    ));
                }
            }
        }
        let mut hit = vec![false; to.order()];
        for &m in &map {
            hit[m as usize] = true;
        }
        if !hit.iter().all(|&h| h) {
            return Err(Error::InvalidHomomorphism(
                "images do not generate the codomain".into(),
            ));
        }
        Ok(Homomorphism { from, to, map })
    }

    pub fn apply_idx(&self, idx: u32) -> u32 {
        self.map[idx as usize]
    }

    pub fn apply(&self, e: &Element) -> Result<Element> {
        let idx = self
            .from
            .element_index(e)
            .ok_or_else(|| Error::InvalidParams("element not in domain".into()))?;
        Ok(self.to.element(self.map[idx as usize]).clone())
    }

    pub fn kernel_indices(&self) -> Vec<u32> {
        (0..self.from.order() as u32)
            .filter(|&i| self.map[i as usize] == 0)
            .collect()
    }

    /// Whether the kernel lies in every maximal subgroup of the domain.
    pub fn is_frattini(&self) -> Result<bool> {
        let kernel = self.kernel_indices();
        if let Some(components) = self.from.kind.zmr_components() {
            // an element lies in every maximal subgroup iff its mod-p
            // coordinates vanish for every prime p dividing a component
            let mut primes: Vec<u64> = Vec::new();
            for &(m, _) in &components {
                for p in prime_factors(m) {
                    if !primes.contains(&p) {
                        primes.push(p);
                    }
                }
            }
            for &ki in &kernel {
                for &p in &primes {
                    let mut coords = Vec::new();
                    self.from
                        .kind
                        .coords_mod_p(self.from.element(ki), p, &mut coords);
                    if coords.iter().any(|&c| c != 0) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        } else {
            let lattice = self.from.subgroup_lattice()?;
            for &mi in &lattice.maximal {
                let h = &lattice.subgroups[mi];
                if kernel.iter().any(|&ki| !bitset_get(&h.bitset, ki)) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Result of pushing a word set through a quotient map.
#[derive(Clone, Debug, Serialize)]
pub struct PushforwardReport {
    pub delta_domain: Ratio<u64>,
    pub delta_image: Ratio<u64>,
    /// delta can only improve under quotients
    pub monotone: bool,
    /// kernel contained in every maximal subgroup of the domain
    pub frattini: bool,
    /// exact equality of the two deltas (guaranteed when `frattini`)
    pub equal: bool,
}

/// Compute detection probability on both sides of an epimorphism and check
/// monotonicity, detecting whether the map is a Frattini extension (in which
/// case the two values must be equal).
pub fn quotient_pushforward_check(ws: &WordSet, hom: &Homomorphism) -> Result<PushforwardReport> {
    let domain_elems = hom.from.evaluate_set(ws)?;
    let image_elems: Vec<Element> = domain_elems
        .iter()
        .map(|e| hom.apply(e))
        .collect::<Result<_>>()?;
    let delta_domain = hom.from.exact_delta(&domain_elems)?;
    let delta_image = hom.to.exact_delta(&image_elems)?;
    let frattini = hom.is_frattini()?;
    Ok(PushforwardReport {
        delta_domain,
        delta_image,
        monotone: delta_image >= delta_domain,
        frattini,
        equal: delta_image == delta_domain,
    })
}

// ---- PMSG sampling -----------------------------------------------------------

/// Parameters for the uniform polynomial-maximal-subgroup-growth bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PmsgParams {
    /// uniform growth exponent E'
    pub e_prime: Ratio<u64>,
    /// target detection probability, must satisfy 0 < delta < 1/3
    pub delta: Ratio<u64>,
    /// group rank
    pub k: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PmsgBound {
    /// sample size: ceil((2 + E'k) / ((1-delta) - H2(1-delta)))
    pub n: u64,
    /// the linear-envelope constant 2E' / ((1-delta) - H2(1-delta))
    pub c_formula: f64,
}

/// Sample size making a union bound over maximal subgroups work out for a
/// uniformly PMSG family with exponent `e_prime`.
pub fn pmsg_sample_size(p: &PmsgParams) -> Result<PmsgBound> {
    let delta = p.delta.to_f64().unwrap();
    if !(delta > 0.0 && p.delta < Ratio::new(1, 3)) {
        return Err(Error::InvalidParams(format!(
            "delta must lie in (0, 1/3), got {}",
            p.delta
        )));
    }
    let e_prime = p.e_prime.to_f64().unwrap();
    let denom = (1.0 - delta) - crate::abelian::gv_entropy(2, 1.0 - delta)?;
    debug_assert!(denom > 0.0);
    let n = ((2.0 + e_prime * p.k as f64) / denom).ceil() as u64;
    Ok(PmsgBound { n, c_formula: 2.0 * e_prime / denom })
}

#[derive(Clone, Debug)]
pub struct SolvableCode {
    pub elements: Vec<Element>,
    pub delta: Ratio<u64>,
    pub n: u64,
    pub attempts: u32,
}

/// Sample `pmsg_sample_size` uniform elements of a solvable group and resample
/// until the exact detection probability reaches the target.
pub fn solvable_random_code(
    g: &FiniteGroup,
    params: &PmsgParams,
    seed: u64,
    max_resamples: u32,
) -> Result<SolvableCode> {
    if !g.is_solvable() {
        let series = g.derived_series();
        return Err(Error::NotSolvable {
            stabilised_order: *series.last().unwrap(),
        });
    }
    let bound = pmsg_sample_size(params)?;
    let n = bound.n;
    let mut best: Option<SolvableCode> = None;
    for attempt in 0..max_resamples {
        let mut rng = crate::rng::substream(seed, &format!("solvable/attempt/{attempt}"));
        let idxs: Vec<u32> = (0..n)
            .map(|_| rng.gen_range(0..g.order() as u32))
            .collect();
        let elements: Vec<Element> = idxs.iter().map(|&i| g.element(i).clone()).collect();
        let delta = g.exact_delta(&elements)?;
        let candidate = SolvableCode { elements, delta, n, attempts: attempt + 1 };
        if delta >= params.delta {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|b| candidate.delta > b.delta) {
            best = Some(candidate);
        }
    }
    let best = best.unwrap();
    Err(Error::CertificationFailed {
        attempts: max_resamples,
        best_delta: best.delta.to_string(),
        target: params.delta.to_string(),
    })
}

// ---- small number-theory helpers ---------------------------------------------

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// (p^r - 1) / (p - 1), the number of functionals up to scalar.
fn functional_count(p: u64, r: usize) -> u128 {
    let mut total: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..r {
        total += power;
        power = power.saturating_mul(p as u128);
    }
    total
}

/// Enumerate nonzero functionals over F_p^r normalized so the first nonzero
/// coefficient is 1.
fn for_each_normalized_functional(p: u64, r: usize, mut f: impl FnMut(&[u64])) {
    let mut alpha = vec![0u64; r];
    for lead in 0..r {
        for a in alpha.iter_mut().take(lead) {
            *a = 0;
        }
        alpha[lead] = 1;
        for a in alpha.iter_mut().skip(lead + 1) {
            *a = 0;
        }
        loop {
            f(&alpha);
            // odometer over positions after lead
            let mut pos = r;
            loop {
                if pos == lead + 1 {
                    break;
                }
                pos -= 1;
                alpha[pos] += 1;
                if alpha[pos] < p {
                    break;
                }
                alpha[pos] = 0;
            }
            if pos == lead + 1 && alpha[r - 1] == 0 && (lead + 1..r).all(|i| alpha[i] == 0) {
                break;
            }
            if r == lead + 1 {
                break;
            }
        }
    }
}

fn bitset_get(bs: &[u64], i: u32) -> bool {
    bs[i as usize / 64] >> (i % 64) & 1 == 1
}

fn bitset_set(bs: &mut [u64], i: u32) {
    bs[i as usize / 64] |= 1 << (i % 64);
}

fn bitset_count(bs: &[u64]) -> usize {
    bs.iter().map(|w| w.count_ones() as usize).sum()
}

fn bitset_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x & !y == 0)
}

fn bitset_members(bs: &[u64]) -> Vec<u32> {
    let mut out = Vec::new();
    for (wi, &w) in bs.iter().enumerate() {
        let mut word = w;
        while word != 0 {
            let b = word.trailing_zeros();
            out.push(wi as u32 * 64 + b);
            word &= word - 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[i32]) -> Word {
        Word::new(letters.to_vec()).unwrap()
    }

    #[test]
    fn evaluate_in_z5() {
        let g = FiniteGroup::zmr(5, 2).unwrap();
        // w = x1 x2 at (2, 3) in Z_5: generators are e1, e2, so evaluate the
        // word x1^2 x2^3 instead to land on (2,3)... simpler: custom gens.
        let spec = GroupSpec::Zmr {
            m: 5,
            r: 1,
            generators: vec![ElementRepr::Tuple(vec![2]), ElementRepr::Tuple(vec![3])],
        };
        let g5 = FiniteGroup::from_spec(&spec, GroupCaps::default()).unwrap();
        let e = g5.evaluate(&w(&[1, 2])).unwrap();
        assert_eq!(e, Element::Tuple(vec![0])); // 2 + 3 mod 5

        let id = g.evaluate(&Word::identity()).unwrap();
        assert_eq!(&id, g.identity());
    }

    #[test]
    fn evaluate_perm_convention() {
        // g = ((1 2), (2 3)); w = x1 x2 x1^-1 evaluates to (1 3), fixing 2,
        // under left-to-right composition.
        let g = FiniteGroup::perm(3, &[vec![2, 1, 3], vec![1, 3, 2]]).unwrap();
        let e = g.evaluate(&w(&[1, 2, -1])).unwrap();
        assert_eq!(e, Element::Tuple(vec![2, 1, 0])); // images of 1,2,3 are 3,2,1
    }

    #[test]
    fn evaluation_invariant_under_reduction() {
        let g = FiniteGroup::symmetric(4).unwrap();
        let word = w(&[1, 2, -2, 1, -1, 2]);
        assert_eq!(
            g.evaluate(&word).unwrap(),
            g.evaluate(&word.reduce()).unwrap()
        );
    }

    #[test]
    fn s3_lattice() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let l = g.subgroup_lattice().unwrap();
        assert_eq!(l.subgroups.len(), 6);
        assert_eq!(l.maximal.len(), 4);
        let max_orders: Vec<usize> = l.maximal.iter().map(|&i| l.subgroups[i].order).collect();
        assert_eq!(max_orders.iter().filter(|&&o| o == 2).count(), 3);
        assert_eq!(max_orders.iter().filter(|&&o| o == 3).count(), 1);
    }

    #[test]
    fn z6_lattice() {
        let g = FiniteGroup::cyclic(6).unwrap();
        let l = g.subgroup_lattice().unwrap();
        assert_eq!(l.subgroups.len(), 4);
        let orders: Vec<usize> = l.subgroups.iter().map(|s| s.order).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        assert_eq!(l.maximal.len(), 2);
    }

    #[test]
    fn z2_lattice() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let l = g.subgroup_lattice().unwrap();
        assert_eq!(l.subgroups.len(), 2);
        assert_eq!(l.maximal.len(), 1);
    }

    #[test]
    fn exact_delta_s3() {
        let g = FiniteGroup::symmetric(3).unwrap();
        // A = {(1 2), (1 2 3)}
        let a = vec![
            g.element_from_repr(&ElementRepr::Tuple(vec![2, 1, 3])).unwrap(),
            g.element_from_repr(&ElementRepr::Tuple(vec![2, 3, 1])).unwrap(),
        ];
        assert_eq!(g.exact_delta(&a).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn exact_delta_non_generating_is_zero() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let a = vec![g.identity().clone()];
        assert_eq!(g.exact_delta(&a).unwrap(), Ratio::new(0, 1));
    }

    #[test]
    fn exact_delta_hadamard_f2() {
        // Hadamard words for k=2 evaluated in Z_2^2 give delta 1/2.
        let g = FiniteGroup::zmr(2, 2).unwrap();
        let ws = WordSet::new(
            2,
            vec![Word::identity(), w(&[1]), w(&[2]), w(&[1, 2])],
            "had2",
        )
        .unwrap();
        assert_eq!(g.exact_delta_words(&ws).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn abelian_path_matches_lattice_path() {
        for (m, r) in [(2u64, 2usize), (4, 1), (6, 1), (3, 2)] {
            let g = FiniteGroup::zmr(m, r).unwrap();
            let mut rng = crate::rng::substream(11, &format!("delta-agree/{m}/{r}"));
            for _ in 0..10 {
                let tuple: Vec<Element> = (0..3)
                    .map(|_| g.element(rng.gen_range(0..g.order() as u32)).clone())
                    .collect();
                let idxs = g.element_indices(&tuple).unwrap();
                let components = g.kind.zmr_components().unwrap();
                let fast = g.exact_delta_abelian(&idxs, &components).unwrap();
                let slow = g.exact_delta_lattice(&idxs).unwrap();
                assert_eq!(fast, slow, "mismatch in Z_{m}^{r}");
            }
        }
    }

    #[test]
    fn vector_space_delta_example() {
        let ws = WordSet::new(2, vec![w(&[1]), w(&[2]), w(&[1, 2])], "a").unwrap();
        assert_eq!(
            exact_delta_vector_space(&ws, 2, 1 << 24).unwrap(),
            Ratio::new(2, 3)
        );
        let basis = WordSet::basis(2);
        assert_eq!(
            exact_delta_vector_space(&basis, 2, 1 << 24).unwrap(),
            Ratio::new(1, 2)
        );
        let ident = WordSet::new(2, vec![Word::identity()], "id").unwrap();
        assert_eq!(
            exact_delta_vector_space(&ident, 2, 1 << 24).unwrap(),
            Ratio::new(0, 1)
        );
    }

    #[test]
    fn vector_space_delta_odd_p_matches_mask_free_path() {
        let ws = WordSet::new(3, vec![w(&[1]), w(&[2]), w(&[3]), w(&[1, 2, 3])], "a").unwrap();
        let d3 = exact_delta_vector_space(&ws, 3, 1 << 24).unwrap();
        // each hyperplane misses at least one basis vector
        assert!(d3 > Ratio::new(0, 1));
    }

    #[test]
    fn pushforward_z4_to_z2() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let hom = Homomorphism::from_generator_images(
            &z4,
            &z2,
            &[z2.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap()],
        )
        .unwrap();
        let ws = WordSet::new(1, vec![w(&[1])], "gen").unwrap();
        let report = quotient_pushforward_check(&ws, &hom).unwrap();
        assert_eq!(report.delta_domain, Ratio::new(1, 1));
        assert_eq!(report.delta_image, Ratio::new(1, 1));
        assert!(report.monotone);
        assert!(report.frattini, "kernel {{0,2}} lies in the unique maximal subgroup");
        assert!(report.equal);
    }

    #[test]
    fn pushforward_projection_monotone() {
        let z22 = FiniteGroup::zmr(2, 2).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        // project onto the first coordinate: e1 -> 1, e2 -> 0
        let hom = Homomorphism::from_generator_images(
            &z22,
            &z2,
            &[
                z2.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap(),
                z2.element_from_repr(&ElementRepr::Tuple(vec![0])).unwrap(),
            ],
        )
        .unwrap();
        let ws = WordSet::basis(2);
        let report = quotient_pushforward_check(&ws, &hom).unwrap();
        assert!(report.monotone);
        assert_eq!(report.delta_domain, Ratio::new(1, 2));
    }

    #[test]
    fn identity_hom_is_equality() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let images: Vec<Element> = g.generators.iter().map(|&i| g.element(i).clone()).collect();
        let hom = Homomorphism::from_generator_images(&g, &g, &images).unwrap();
        let ws = WordSet::new(2, vec![w(&[1]), w(&[2]), w(&[1, 2])], "a").unwrap();
        let report = quotient_pushforward_check(&ws, &hom).unwrap();
        assert!(report.equal);
    }

    #[test]
    fn invalid_hom_rejected() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        // 1 -> 1 does not extend to Z_4 -> Z_3
        let res = Homomorphism::from_generator_images(
            &z4,
            &z3,
            &[z3.element_from_repr(&ElementRepr::Tuple(vec![1])).unwrap()],
        );
        assert!(res.is_err());
    }

    #[test]
    fn derived_series_s3() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(g.derived_series(), vec![6, 3, 1]);
        assert!(g.is_solvable());
    }

    #[test]
    fn s5_not_solvable() {
        let g = FiniteGroup::symmetric(5).unwrap();
        assert!(!g.is_solvable());
    }

    #[test]
    fn pmsg_formula_examples() {
        let b = pmsg_sample_size(&PmsgParams {
            e_prime: Ratio::new(17, 4),
            delta: Ratio::new(1, 10),
            k: 10,
        })
        .unwrap();
        assert_eq!(b.n, 104);

        // delta -> 0 limit: denominator tends to 1, n to ceil(2 + E'k)
        let b = pmsg_sample_size(&PmsgParams {
            e_prime: Ratio::new(4, 1),
            delta: Ratio::new(1, 1_000_000),
            k: 10,
        })
        .unwrap();
        assert!(b.n >= 42 && b.n <= 44, "n = {}", b.n);

        assert!(pmsg_sample_size(&PmsgParams {
            e_prime: Ratio::new(17, 4),
            delta: Ratio::new(1, 3),
            k: 10,
        })
        .is_err());
    }

    #[test]
    fn solvable_code_on_s3() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let params = PmsgParams {
            e_prime: Ratio::new(17, 4),
            delta: Ratio::new(1, 10),
            k: 2,
        };
        let code = solvable_random_code(&g, &params, 42, 20).unwrap();
        assert!(code.delta >= Ratio::new(1, 10));
        assert_eq!(code.n, 25);
    }

    #[test]
    fn solvable_code_rejects_s5() {
        let g = FiniteGroup::symmetric(5).unwrap();
        let params = PmsgParams {
            e_prime: Ratio::new(17, 4),
            delta: Ratio::new(1, 10),
            k: 2,
        };
        assert!(solvable_random_code(&g, &params, 1, 3).is_err());
    }

    #[test]
    fn maximal_equals_all_proper() {
        let groups = [
            FiniteGroup::symmetric(3).unwrap(),
            FiniteGroup::symmetric(4).unwrap(),
            FiniteGroup::cyclic(12).unwrap(),
            FiniteGroup::zmr(2, 3).unwrap(),
        ];
        for g in &groups {
            let mut rng = crate::rng::substream(5, "max-vs-all");
            for _ in 0..5 {
                let tuple: Vec<Element> = (0..4)
                    .map(|_| g.element(rng.gen_range(0..g.order() as u32)).clone())
                    .collect();
                assert_eq!(
                    g.exact_delta(&tuple).unwrap(),
                    g.exact_delta_all_proper(&tuple).unwrap()
                );
            }
        }
    }

    #[test]
    fn rank_of_small_groups() {
        assert_eq!(FiniteGroup::symmetric(3).unwrap().rank_brute_force(3), Some(2));
        assert_eq!(FiniteGroup::symmetric(4).unwrap().rank_brute_force(3), Some(2));
        assert_eq!(FiniteGroup::zmr(2, 2).unwrap().rank_brute_force(3), Some(2));
    }

    #[test]
    fn group_spec_json_round_trip() {
        let spec = GroupSpec::Product {
            left: Box::new(GroupSpec::Zmr {
                m: 2,
                r: 1,
                generators: vec![ElementRepr::Tuple(vec![1])],
            }),
            right: Box::new(GroupSpec::Perm {
                degree: 3,
                generators: vec![
                    ElementRepr::Tuple(vec![2, 1, 3]),
                    ElementRepr::Tuple(vec![2, 3, 1]),
                ],
            }),
            generators: vec![ElementRepr::Pair {
                left: Box::new(ElementRepr::Tuple(vec![1])),
                right: Box::new(ElementRepr::Tuple(vec![2, 1, 3])),
            }],
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: GroupSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn wreath_style_product_is_solvable() {
        // Z_2 wr Z_3 as a permutation group on 6 points
        let g = FiniteGroup::perm(6, &[vec![2, 1, 3, 4, 5, 6], vec![3, 4, 5, 6, 1, 2]]).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.is_solvable());
    }
}
