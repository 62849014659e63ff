//! Meridional inertia in a finite-index subgroup `U`, the ramification
//! subgroup `M_U` (normal closure of inertia), the unramified quotient
//! `U/M_U`, and their images in finite quotients.
//!
//! Inertia at the coset `U g` is `U ∩ g<m>g⁻¹ = g<m^e>g⁻¹`, where `e` is the
//! length of the meridian orbit through that coset: the stabilizer of a point
//! under a cyclic action is generated by the least power fixing it.

use serde::{Deserialize, Serialize};

use crate::coset::CosetTable;
use crate::error::{Error, Result};
use crate::linalg::AbelianInvariants;
use crate::perm::{word_image, Elem, ElemSet, FiniteGroup, Perm};
use crate::presentation::{KnotGroupData, Presentation};
use crate::schreier::{reidemeister_schreier, rewrite, schreier_transversal, SchreierData, SubgroupPresentation};
use crate::word::Word;

/// Inertia at one meridian orbit of cosets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaDatum {
    /// Smallest coset in the orbit.
    pub rep_coset: usize,
    /// Orbit length.
    pub ramification_index: usize,
    /// `t_c · m^e · t_c⁻¹`.
    pub generator_in_g: Word,
    /// The same element rewritten in the subgroup generators.
    pub generator_in_u: Word,
}

/// Meridian permutation on cosets, 1-based orbits in order of their smallest
/// member.
pub fn meridian_orbits(table: &CosetTable, m: &Word) -> Vec<Vec<usize>> {
    let n = table.index();
    let mut seen = vec![false; n + 1];
    let mut orbits = Vec::new();
    for c in 1..=n {
        if seen[c] {
            continue;
        }
        let mut orbit = vec![c];
        seen[c] = true;
        let mut d = table.trace(c, m);
        while d != c {
            seen[d] = true;
            orbit.push(d);
            d = table.trace(d, m);
        }
        orbits.push(orbit);
    }
    orbits
}

/// One datum per meridian orbit on the cosets.
pub fn inertia_data(table: &CosetTable, sd: &SchreierData, m: &Word) -> Vec<InertiaDatum> {
    meridian_orbits(table, m)
        .into_iter()
        .map(|orbit| {
            let c = orbit[0];
            let e = orbit.len();
            let t = sd.representative(c);
            let generator_in_g = t.conjugate(&m.pow(e as i64));
            let generator_in_u = rewrite(table, sd, &generator_in_g).expect("inertia generator lies in the subgroup");
            InertiaDatum {
                rep_coset: c,
                ramification_index: e,
                generator_in_g,
                generator_in_u,
            }
        })
        .collect()
}

/// The subgroup presentation with every inertia generator added as a relator.
pub fn unramified_quotient(upres: &SubgroupPresentation, inertia: &[InertiaDatum]) -> Presentation {
    upres
        .presentation
        .with_extra_relators(inertia.iter().map(|d| d.generator_in_u.clone()))
}

/// A boundary torus of the cover: an orbit of `<m, l>` on cosets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub cosets: Vec<usize>,
    /// Representative cosets of the meridian orbits inside this component.
    pub meridian_orbits: Vec<usize>,
}

pub fn boundary_components(table: &CosetTable, m: &Word, l: Option<&Word>) -> Result<Vec<BoundaryComponent>> {
    let l = l.ok_or(Error::LongitudeMissing)?;
    let perms = [table.word_permutation(m), table.word_permutation(l)];
    let orbits = Perm::orbits(table.index(), &perms);
    let m_orbits = meridian_orbits(table, m);
    Ok(orbits
        .into_iter()
        .map(|o| {
            let cosets: Vec<usize> = o.iter().map(|&c| c + 1).collect();
            let meridian_orbits = m_orbits
                .iter()
                .filter(|mo| cosets.contains(&mo[0]))
                .map(|mo| mo[0])
                .collect();
            BoundaryComponent {
                cosets,
                meridian_orbits,
            }
        })
        .collect())
}

/// Everything computed for one finite-index subgroup.
#[derive(Clone, Debug)]
pub struct Cover {
    pub table: CosetTable,
    pub schreier: SchreierData,
    pub subgroup: SubgroupPresentation,
    pub inertia: Vec<InertiaDatum>,
    pub quotient: Presentation,
}

impl Cover {
    pub fn new(knot: &KnotGroupData, table: CosetTable) -> Self {
        let schreier = schreier_transversal(&table);
        let subgroup = reidemeister_schreier(&knot.presentation, &table, &schreier);
        let inertia = inertia_data(&table, &schreier, &knot.meridian);
        let quotient = unramified_quotient(&subgroup, &inertia);
        Cover {
            table,
            schreier,
            subgroup,
            inertia,
            quotient,
        }
    }

    pub fn index(&self) -> usize {
        self.table.index()
    }

    pub fn ramification_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.inertia.iter().map(|d| d.ramification_index).collect();
        v.sort_unstable();
        v
    }

    pub fn report(&self, knot: &KnotGroupData) -> RamificationReport {
        let g_names = knot.presentation.generator_names();
        let u_names = self.subgroup.presentation.generator_names();
        let boundary_tori = boundary_components(&self.table, &knot.meridian, knot.longitude.as_ref())
            .ok()
            .map(|c| c.len());
        RamificationReport {
            index: self.index(),
            subgroup: self.table.spec.describe(g_names),
            inertia: self
                .inertia
                .iter()
                .map(|d| InertiaEntry {
                    rep_coset: d.rep_coset,
                    ramification_index: d.ramification_index,
                    generator_in_g: d.generator_in_g.display(g_names).to_string(),
                    generator_in_u: d.generator_in_u.display(u_names).to_string(),
                })
                .collect(),
            subgroup_presentation: PresentationSummary::new(&self.subgroup.presentation),
            quotient_presentation: PresentationSummary::new(&self.quotient),
            h1_u: self.subgroup.presentation.abelianization(),
            h1_quotient: self.quotient.abelianization(),
            boundary_tori,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl PresentationSummary {
    pub fn new(p: &Presentation) -> Self {
        PresentationSummary {
            generators: p.generator_names().to_vec(),
            relators: p.relators().iter().map(|r| p.format_word(r)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaEntry {
    pub rep_coset: usize,
    pub ramification_index: usize,
    #[serde(rename = "generator_in_G")]
    pub generator_in_g: String,
    #[serde(rename = "generator_in_U")]
    pub generator_in_u: String,
}

/// Serializable summary of a [`Cover`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationReport {
    pub index: usize,
    pub subgroup: String,
    pub inertia: Vec<InertiaEntry>,
    pub subgroup_presentation: PresentationSummary,
    pub quotient_presentation: PresentationSummary,
    #[serde(rename = "h1_U")]
    pub h1_u: AbelianInvariants,
    pub h1_quotient: AbelianInvariants,
    pub boundary_tori: Option<usize>,
}

impl RamificationReport {
    pub const CSV_HEADER: &'static str =
        "label,index,ramification_indices,h1_U,h1_U_torsion_order,h1_quotient,h1_quotient_order,boundary_tori";

    pub fn csv_row(&self, label: &str) -> String {
        let mut e: Vec<usize> = self.inertia.iter().map(|d| d.ramification_index).collect();
        e.sort_unstable();
        let e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        let order = match self.h1_quotient.order() {
            Some(o) => o.to_string(),
            None => "inf".to_string(),
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            csv_field(label),
            self.index,
            e.join(" "),
            csv_field(&self.h1_u.to_string()),
            self.h1_u.torsion_order(),
            csv_field(&self.h1_quotient.to_string()),
            order,
            self.boundary_tori.map_or(String::new(), |b| b.to_string())
        )
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("subgroup: {}\nindex: {}\n", self.subgroup, self.index);
        for d in &self.inertia {
            s.push_str(&format!(
                "inertia at coset {}: e = {}, generator {} (in U: {})\n",
                d.rep_coset, d.ramification_index, d.generator_in_g, d.generator_in_u
            ));
        }
        s.push_str(&format!(
            "U: {} generators, {} relators\n",
            self.subgroup_presentation.generators.len(),
            self.subgroup_presentation.relators.len()
        ));
        s.push_str(&format!("H1(U) = {}\nH1(U/M_U) = {}\n", self.h1_u, self.h1_quotient));
        if let Some(b) = self.boundary_tori {
            s.push_str(&format!("boundary tori: {b}\n"));
        }
        s
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A homomorphism to a permutation group, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteQuotient {
    pub degree: usize,
    pub images: Vec<Perm>,
}

impl FiniteQuotient {
    pub fn new(degree: usize, images: Vec<Perm>) -> Self {
        assert!(images.iter().all(|p| p.degree() == degree));
        FiniteQuotient { degree, images }
    }

    /// Fails with the 1-based number of the first relator not killed.
    pub fn check(&self, pres: &Presentation) -> Result<()> {
        if self.images.len() != pres.n_gens() {
            return Err(Error::InvalidSpec(format!(
                "{} images for {} generators",
                self.images.len(),
                pres.n_gens()
            )));
        }
        for (i, r) in pres.relators().iter().enumerate() {
            if !self.image(r).is_identity() {
                return Err(Error::RelatorNotKilled(i + 1));
            }
        }
        Ok(())
    }

    pub fn image(&self, w: &Word) -> Perm {
        word_image(w, &self.images, self.degree)
    }

    pub fn group(&self) -> FiniteGroup {
        FiniteGroup::generate(self.degree, &self.images)
    }

    /// Composite with the embedding of a subgroup.
    pub fn restrict(&self, upres: &SubgroupPresentation) -> FiniteQuotient {
        FiniteQuotient {
            degree: self.degree,
            images: upres.embedding.iter().map(|w| self.image(w)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|p| p.is_identity())
    }
}

/// `q(M_U)`: the normal closure in `F = q(U)` of the images of the inertia
/// generators. Returns `F` together with the subgroup.
pub fn quotient_image_of_ramification(
    upres: &Presentation,
    q: &FiniteQuotient,
    inertia: &[InertiaDatum],
) -> Result<(FiniteGroup, ElemSet)> {
    q.check(upres)?;
    let f = q.group();
    let seeds: Vec<Elem> = inertia.iter().map(|d| f.eval(&d.generator_in_u)).collect();
    let closure = f.normal_closure(seeds, &f.generators());
    Ok((f, closure))
}

/// Intersection of all normal subgroups of `f` containing `elems`, by brute
/// force over the normal-subgroup lattice.
pub fn smallest_normal_containing(f: &FiniteGroup, elems: &[Elem]) -> ElemSet {
    f.normal_subgroups()
        .into_iter()
        .filter(|n| elems.iter().all(|e| n.contains(e)))
        .reduce(|a, b| a.intersection(&b).copied().collect())
        .expect("the whole group contains everything")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactoringResult {
    /// Induced map on `U/M_U`, with the same generator images.
    Factors(FiniteQuotient),
    /// An inertia datum whose image is nontrivial.
    Violation { datum: usize, image: Perm },
}

impl FactoringResult {
    pub fn factors(&self) -> bool {
        matches!(self, FactoringResult::Factors(_))
    }
}

/// Decides whether `phi` (a homomorphism on `U`) factors through `U/M_U`.
pub fn factoring_check(
    upres: &Presentation,
    quotient: &Presentation,
    phi: &FiniteQuotient,
    inertia: &[InertiaDatum],
) -> Result<FactoringResult> {
    phi.check(upres)?;
    for (i, d) in inertia.iter().enumerate() {
        let image = phi.image(&d.generator_in_u);
        if !image.is_identity() {
            return Ok(FactoringResult::Violation { datum: i, image });
        }
    }
    phi.check(quotient)?;
    Ok(FactoringResult::Factors(phi.clone()))
}

/// The regular action of a finite group as a coset table (of the trivial
/// subgroup of that group, equivalently of the kernel of `G -> F`).
pub fn regular_table(f: &FiniteGroup) -> CosetTable {
    let gens = f.generators();
    let perms: Vec<Perm> = gens
        .iter()
        .map(|&g| Perm::from_images(f.all().map(|e| f.mul(e, g) as u32).collect()).unwrap())
        .collect();
    CosetTable::from_permutations(
        &perms,
        f.order(),
        crate::coset::SubgroupSpec::PermRep {
            perms: perms.clone(),
            point: 1,
        },
    )
}

/// Finite-level checks of the closure identities for inertia.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShadowReport {
    /// `|G/N|`
    pub quotient_order: usize,
    /// `|q(U)|`
    pub image_order: usize,
    pub ramification_index: usize,
    /// `q(U ∩ g<m>g⁻¹) = q(U) ∩ q(g)<q(m)>q(g)⁻¹`
    pub intersection_identity: bool,
    /// `q(M_U)` equals the normal closure in `q(U)` of all
    /// `q(U) ∩ x<q(m)>x⁻¹`, `x ∈ G/N`.
    pub closure_identity: bool,
}

impl ShadowReport {
    pub fn passed(&self) -> bool {
        self.intersection_identity && self.closure_identity
    }
}

/// Cover data realized inside a finite quotient `F = G/N` with `N ≤ U`.
pub struct ShadowContext {
    pub f: FiniteGroup,
    /// `q(U)`
    pub image_u: ElemSet,
    pub image_u_gens: Vec<Elem>,
    /// `q(M_U)` from the discrete inertia data.
    pub image_m_u: ElemSet,
    /// `q(m)`
    pub meridian: Elem,
    meridian_word: Word,
}

impl ShadowContext {
    /// `table_n` must describe a normal subgroup `N ≤ U` of finite index.
    pub fn new(knot: &KnotGroupData, cover: &Cover, table_n: &CosetTable) -> Result<Self> {
        let idx = table_n.index();
        let f =
            FiniteGroup::generate_bounded(idx, &table_n.generator_permutations(), idx + 1).ok_or(Error::NotNormal)?;
        if f.order() != idx {
            return Err(Error::NotNormal);
        }
        // N ≤ U iff N-coset d ↦ U-coset of its representative is equivariant
        let sd_n = schreier_transversal(table_n);
        let to_u: Vec<usize> = (1..=idx)
            .map(|d| cover.table.trace(1, sd_n.representative(d)))
            .collect();
        for d in 1..=idx {
            for x in 0..table_n.n_gens() {
                let l = crate::word::Letter::pos(x);
                if to_u[table_n.act(d, l) - 1] != cover.table.act(to_u[d - 1], l) {
                    return Err(Error::NotContainedInU);
                }
            }
        }
        let image_u: ElemSet = f.all().filter(|&e| to_u[f.perm(e).apply(0)] == 1).collect();
        let image_u_gens: Vec<Elem> = cover.subgroup.embedding.iter().map(|w| f.eval(w)).collect();
        debug_assert_eq!(f.subgroup(image_u_gens.iter().copied()), image_u);
        let seeds: Vec<Elem> = cover.inertia.iter().map(|d| f.eval(&d.generator_in_g)).collect();
        let image_m_u = f.normal_closure(seeds, &image_u_gens);
        let meridian = f.eval(&knot.meridian);
        Ok(ShadowContext {
            f,
            image_u,
            image_u_gens,
            image_m_u,
            meridian,
            meridian_word: knot.meridian.clone(),
        })
    }

    /// `q(U) ∩ x<q(m)>x⁻¹`
    pub fn local_inertia(&self, x: Elem) -> ElemSet {
        let mx = self.f.conj_set(x, &self.f.cyclic(self.meridian));
        mx.intersection(&self.image_u).copied().collect()
    }

    /// Normal closure in `q(U)` of every `q(U) ∩ x<q(m)>x⁻¹`.
    pub fn closure_of_local_inertia(&self) -> ElemSet {
        let mut seeds = ElemSet::new();
        for x in self.f.all() {
            seeds.extend(self.local_inertia(x));
        }
        self.f.normal_closure(seeds, &self.image_u_gens)
    }

    /// Checks both identities at the coset `U g`; `closure` is
    /// [`Self::closure_of_local_inertia`], computed once per `N`.
    pub fn check(&self, cover: &Cover, closure: &ElemSet, g: &Word) -> ShadowReport {
        let f = &self.f;
        let c = cover.table.trace(1, g);
        let e = orbit_length(&cover.table, c, &self.meridian_word);
        let local = g.conjugate(&self.meridian_word.pow(e as i64));
        let lhs = f.cyclic(f.eval(&local));
        let rhs = self.local_inertia(f.eval(g));
        ShadowReport {
            quotient_order: f.order(),
            image_order: self.image_u.len(),
            ramification_index: e,
            intersection_identity: lhs == rhs,
            closure_identity: &self.image_m_u == closure,
        }
    }
}

fn orbit_length(table: &CosetTable, c: usize, m: &Word) -> usize {
    let mut d = table.trace(c, m);
    let mut e = 1;
    while d != c {
        d = table.trace(d, m);
        e += 1;
    }
    e
}

/// Both closure identities for a single `g`, computed from scratch.
pub fn closure_shadow_check(
    knot: &KnotGroupData,
    cover: &Cover,
    table_n: &CosetTable,
    g: &Word,
) -> Result<ShadowReport> {
    let ctx = ShadowContext::new(knot, cover, table_n)?;
    let closure = ctx.closure_of_local_inertia();
    Ok(ctx.check(cover, &closure, g))
}

/// Finite-level transport of inertia families along an isomorphism of
/// quotients that carries the meridian subgroup to a conjugate of the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransportReport {
    pub order: usize,
    pub subgroups_checked: usize,
    /// Every `iso(V ∩ x<m>x⁻¹) = iso(V) ∩ (iso(x)y)<m₂>(iso(x)y)⁻¹`.
    pub families_match: bool,
    /// Every `iso(R(V)) = R(iso(V))`, `R` the normal closure of inertia.
    pub closures_match: bool,
    /// `|V / R(V)|` for each subgroup `V`, equal on both sides when
    /// `closures_match`.
    pub quotient_orders: Vec<usize>,
}

impl TransportReport {
    pub fn passed(&self) -> bool {
        self.families_match && self.closures_match
    }
}

/// An isomorphism `F -> F₂` given by the images of `F`'s generators, as a
/// table from elements of `F` to elements of `F₂`.
pub fn isomorphism_table(f: &FiniteGroup, f2: &FiniteGroup, gens: &[Perm], images: &[Perm]) -> Result<Vec<Elem>> {
    if gens.len() != images.len() {
        return Err(Error::NotIsomorphism("generator count mismatch".into()));
    }
    if f.order() != f2.order() {
        return Err(Error::NotIsomorphism(format!(
            "orders {} and {} differ",
            f.order(),
            f2.order()
        )));
    }
    if let Some(i) = images
        .iter()
        .position(|p| p.degree() != f2.degree() || f2.lookup(p).is_none())
    {
        return Err(Error::NotIsomorphism(format!("image {} is not in the target", i + 1)));
    }
    let (d1, d2) = (f.degree(), f2.degree());
    let diag: Vec<Perm> = gens.iter().zip(images).map(|(a, b)| disjoint_union(a, b)).collect();
    let graph = FiniteGroup::generate_bounded(d1 + d2, &diag, f.order() + 1)
        .filter(|g| g.order() == f.order())
        .ok_or_else(|| Error::NotIsomorphism("generator images do not define a homomorphism".into()))?;
    let mut table = vec![usize::MAX; f.order()];
    let mut hit = vec![false; f2.order()];
    for e in graph.all() {
        let (a, b) = split(graph.perm(e), d1);
        let a = f.lookup(&a).expect("first projection lies in the source");
        let b = f2.lookup(&b).expect("second projection lies in the target");
        table[a] = b;
        hit[b] = true;
    }
    if table.contains(&usize::MAX) || hit.contains(&false) {
        return Err(Error::NotIsomorphism("map is not bijective".into()));
    }
    Ok(table)
}

/// `a` on the first `deg a` points and `b` on the next `deg b`.
pub fn disjoint_union(a: &Perm, b: &Perm) -> Perm {
    let shift = a.degree() as u32;
    let images = a
        .images()
        .iter()
        .copied()
        .chain(b.images().iter().map(|&x| x + shift))
        .collect();
    Perm::from_images(images).unwrap()
}

fn split(p: &Perm, d1: usize) -> (Perm, Perm) {
    let im = p.images();
    let shift = d1 as u32;
    (
        Perm::from_images(im[..d1].to_vec()).unwrap(),
        Perm::from_images(im[d1..].iter().map(|&x| x - shift).collect()).unwrap(),
    )
}

/// Normal closure in `v` of `v ∩ x<m>x⁻¹` over all `x` in the group.
pub fn ramification_closure(f: &FiniteGroup, v: &ElemSet, meridian: Elem) -> ElemSet {
    let cyc = f.cyclic(meridian);
    let mut seeds = ElemSet::new();
    for x in f.all() {
        seeds.extend(f.conj_set(x, &cyc).intersection(v));
    }
    let ambient: Vec<Elem> = v.iter().copied().collect();
    f.normal_closure(seeds, &ambient)
}

/// `q`, `q2` are quotients of two knot groups with meridians `m`, `m2`;
/// `iso` gives the images in `F₂ = q2(G₂)` of the generators of `F = q(G)`
/// and `y ∈ F₂` is the conjugator with `iso(<q(m)>) = y<q2(m2)>y⁻¹`.
pub fn inertia_transport_check(
    q: &FiniteQuotient,
    m: &Word,
    q2: &FiniteQuotient,
    m2: &Word,
    iso: &[Perm],
    y: &Perm,
) -> Result<TransportReport> {
    let f = q.group();
    let f2 = q2.group();
    let phi = isomorphism_table(&f, &f2, &q.images, iso)?;
    let y = f2
        .lookup(y)
        .ok_or_else(|| Error::InvalidSpec(format!("conjugator {y} is not in the target")))?;
    let mer = f.eval(m);
    let mer2 = f2.eval(m2);
    let image = |s: &ElemSet| -> ElemSet { s.iter().map(|&e| phi[e]).collect() };
    let cyc = f.cyclic(mer);
    let cyc2 = f2.cyclic(mer2);
    if image(&cyc) != f2.conj_set(y, &cyc2) {
        return Err(Error::MeridianClassNotPreserved);
    }

    let subgroups = f.all_subgroups(None);
    let mut families_match = true;
    let mut closures_match = true;
    let mut quotient_orders = Vec::with_capacity(subgroups.len());
    for v in &subgroups {
        let v2 = image(v);
        for x in f.all() {
            let local: ElemSet = f.conj_set(x, &cyc).intersection(v).copied().collect();
            let x2 = f2.mul(phi[x], y);
            let local2: ElemSet = f2.conj_set(x2, &cyc2).intersection(&v2).copied().collect();
            if image(&local) != local2 {
                families_match = false;
            }
        }
        let r = ramification_closure(&f, v, mer);
        let r2 = ramification_closure(&f2, &v2, mer2);
        if image(&r) != r2 {
            closures_match = false;
        }
        quotient_orders.push(v.len() / r.len());
    }
    Ok(TransportReport {
        order: f.order(),
        subgroups_checked: subgroups.len(),
        families_match,
        closures_match,
        quotient_orders,
    })
}
