//! The theorem layer: each invariant computed by every applicable
//! route, with exact cross-checks.
//!
//! Routes for the dilaton invariant:
//!   A  - (1/24) times the localized integral of c_top over the double
//!        inertia stack (localization model);
//!   C  - the sum of per-fixed-point commuting-pair counts
//!        (localization model);
//!   B  - the bicyclic-subgroup decomposition: (1/24)(1/|G|) sum over
//!        subgroup classes of conjugates * generating pairs * chi
//!        (quotient model);
//!   B' - the same sum taken pair by pair over all commuting pairs
//!        (quotient model).
//!
//! The divisor invariant uses the c_{top-1} pairing (route A/C on the
//! localization model, route B on the quotient model); its localized
//! total must be independent of the torus parameters, otherwise the
//! lift is invalid.
//!
//! The twisted invariant reports the localized left-hand side against
//! two right-hand sides: the printed three-term form, and a variant
//! whose third term pairs ch_{k+1} with c_{top-1} (with a minus sign)
//! instead of c_top. Both are always computed; where they differ the
//! report says so without deciding which is intended.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::{BicyclicSubgroups, FiniteGroup};
use crate::localize::{
    dilaton_contribution, integrate_double_inertia, selector_term, twisted_component_term,
    Selector, TargetModelL,
};
use crate::poly::TorusRationalFn;
use crate::psi::psi_integral;
use crate::rat::Rat;

/// A global-quotient target: a finite group with Euler-characteristic
/// (and optionally divisor-integral) tables indexed by canonical
/// representatives of bicyclic subgroup conjugacy classes.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetModelQ {
    pub group: FiniteGroup,
    /// chi of the fixed locus of each bicyclic subgroup class, keyed by
    /// the sorted element list of the canonical representative.
    pub euler_table: BTreeMap<Vec<usize>, i64>,
    /// Integral of the divisor against c_{top-1} of the fixed-locus
    /// tangent bundle, same keys.
    pub divisor_table: Option<BTreeMap<Vec<usize>, Rat>>,
}

impl TargetModelQ {
    /// Checks that each table covers exactly the bicyclic subgroup
    /// classes of the group.
    pub fn validate(&self) -> Result<()> {
        let bics = self.group.bicyclic_subgroups();
        self.check_keys(self.euler_table.keys(), &bics, "euler_table")?;
        if let Some(div) = &self.divisor_table {
            self.check_keys(div.keys(), &bics, "divisor_table")?;
        }
        Ok(())
    }

    fn check_keys<'a>(
        &self,
        keys: impl Iterator<Item = &'a Vec<usize>>,
        bics: &BicyclicSubgroups,
        table: &str,
    ) -> Result<()> {
        let mut seen = alloc::vec![false; bics.classes.len()];
        for key in keys {
            match bics.class_of(key) {
                Some(idx) if bics.classes[idx].rep.elems() == key.as_slice() => {
                    seen[idx] = true;
                }
                Some(_) => {
                    return Err(Error::InvalidModel {
                        detail: format!(
                            "{table} key {} is not the canonical class representative",
                            key_string(key)
                        ),
                    })
                }
                None => {
                    return Err(Error::InvalidModel {
                        detail: format!(
                            "{table} key {} is not a bicyclic subgroup",
                            key_string(key)
                        ),
                    })
                }
            }
        }
        for (idx, covered) in seen.iter().enumerate() {
            if !covered {
                return Err(Error::MissingTableEntry {
                    key: format!("{table}:{}", bics.classes[idx].rep.key()),
                });
            }
        }
        Ok(())
    }
}

fn key_string(key: &[usize]) -> String {
    let parts: Vec<String> = key.iter().map(|e| format!("{e}")).collect();
    parts.join(",")
}

/// A parsed target in either model.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    L(TargetModelL),
    Q(TargetModelQ),
}

impl Target {
    pub fn model_tag(&self) -> &'static str {
        match self {
            Target::L(_) => "L",
            Target::Q(_) => "Q",
        }
    }
}

/// One computed route of an invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteValue {
    pub id: &'static str,
    pub value: Rat,
}

/// Whether the computed routes coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
    /// Only one route exists for the supplied model.
    NotApplicable,
}

/// One line of a per-component (or per-subgroup-class) breakdown:
/// a canonical key plus rendered exact values.
#[derive(Clone, Debug)]
pub struct ComponentLine {
    pub key: String,
    pub fields: Vec<(&'static str, String)>,
}

/// Result of one invariant computation with all routes and the
/// per-component breakdown.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub invariant: &'static str,
    pub model: &'static str,
    pub routes: Vec<RouteValue>,
    /// Some(true) when a constancy check ran and passed; None when not
    /// applicable. A failed check aborts with `InvalidLift` instead.
    pub constancy: Option<bool>,
    pub agree: Agreement,
    pub components: Vec<ComponentLine>,
}

impl InvariantReport {
    pub fn value(&self) -> &Rat {
        &self.routes[0].value
    }

    fn conclude(mut self) -> Self {
        self.agree = if self.routes.len() < 2 {
            Agreement::NotApplicable
        } else if self.routes.iter().all(|r| r.value == self.routes[0].value) {
            Agreement::Agree
        } else {
            Agreement::Disagree
        };
        self
    }
}

/// The dilaton invariant by every route the target supports.
pub fn dilaton_invariant(target: &Target) -> Result<InvariantReport> {
    match target {
        Target::L(model) => {
            let mut components = Vec::new();
            for c in model.components()? {
                components.push(ComponentLine {
                    key: c.key(model),
                    fields: alloc::vec![
                        ("centralizer_order", format!("{}", c.centralizer_order())),
                        (
                            "term",
                            format!(
                                "{}",
                                psi_integral() * Rat::new(1, c.centralizer_order() as i64)
                            ),
                        ),
                    ],
                });
            }
            let route_a = integrate_double_inertia(model, Selector::CTop)?
                .scale(&psi_integral())
                .is_constant()
                .expect("c_top integral is a pure number");
            let mut route_c = Rat::zero();
            for p in &model.points {
                route_c += dilaton_contribution(p);
            }
            Ok(InvariantReport {
                invariant: "dilaton",
                model: "L",
                routes: alloc::vec![
                    RouteValue {
                        id: "A",
                        value: route_a,
                    },
                    RouteValue {
                        id: "C",
                        value: route_c,
                    },
                ],
                constancy: None,
                agree: Agreement::Agree,
                components,
            }
            .conclude())
        }
        Target::Q(model) => {
            let (route_b, components) = quotient_route_sum(model, &model.euler_table, |chi| {
                Rat::from_int(*chi)
            })?;
            let route_b2 = quotient_pairwise_sum(model)?;
            Ok(InvariantReport {
                invariant: "dilaton",
                model: "Q",
                routes: alloc::vec![
                    RouteValue {
                        id: "B",
                        value: route_b,
                    },
                    RouteValue {
                        id: "B'",
                        value: route_b2,
                    },
                ],
                constancy: None,
                agree: Agreement::Agree,
                components,
            }
            .conclude())
        }
    }
}

/// (1/24)(1/|G|) sum over subgroup classes of
/// conjugates * generating pairs * value.
fn quotient_route_sum<T>(
    model: &TargetModelQ,
    table: &BTreeMap<Vec<usize>, T>,
    to_rat: impl Fn(&T) -> Rat,
) -> Result<(Rat, Vec<ComponentLine>)> {
    let bics = model.group.bicyclic_subgroups();
    let scale = psi_integral() * Rat::new(1, model.group.order() as i64);
    let mut total = Rat::zero();
    let mut components = Vec::new();
    for class in &bics.classes {
        let value = table
            .get(class.rep.elems())
            .ok_or_else(|| Error::MissingTableEntry {
                key: class.rep.key(),
            })?;
        let value = to_rat(value);
        let term = scale.clone()
            * Rat::from_int((class.conjugate_count() * class.generating_pairs) as i64)
            * value.clone();
        total += term.clone();
        components.push(ComponentLine {
            key: class.rep.key(),
            fields: alloc::vec![
                ("order", format!("{}", class.rep.order())),
                ("conjugates", format!("{}", class.conjugate_count())),
                ("generating_pairs", format!("{}", class.generating_pairs)),
                ("table_value", format!("{value}")),
                ("term", format!("{term}")),
            ],
        });
    }
    Ok((total, components))
}

/// (1/24)(1/|G|) sum over all commuting pairs of chi of the fixed locus
/// of the subgroup each pair generates; an independent evaluation of
/// the same quantity.
fn quotient_pairwise_sum(model: &TargetModelQ) -> Result<Rat> {
    let group = &model.group;
    let bics = group.bicyclic_subgroups();
    let mut total = Rat::zero();
    for (g, h) in group.commuting_pairs() {
        let sub = group.generated_bicyclic_subgroup(g, h)?;
        let class_idx = bics
            .class_of(sub.elems())
            .expect("generated subgroup is bicyclic");
        let key = bics.classes[class_idx].rep.elems().to_vec();
        let chi = model
            .euler_table
            .get(&key)
            .ok_or_else(|| Error::MissingTableEntry {
                key: key_string(&key),
            })?;
        total += Rat::from_int(*chi);
    }
    Ok(total * psi_integral() * Rat::new(1, group.order() as i64))
}

/// The divisor invariant. On the localization model the total must
/// pass the torus-independence check, else the lift is invalid.
pub fn divisor_invariant(target: &Target) -> Result<InvariantReport> {
    match target {
        Target::L(model) => {
            let mut components = Vec::new();
            let mut total = TorusRationalFn::zero(model.vars());
            for c in model.components()? {
                let term = selector_term(model, &c, Selector::DCtopM1)?.scale(&-psi_integral());
                components.push(ComponentLine {
                    key: c.key(model),
                    fields: alloc::vec![
                        ("centralizer_order", format!("{}", c.centralizer_order())),
                        ("term", format!("{term}")),
                    ],
                });
                total = total.add(&term);
            }
            let value = total.is_constant().ok_or_else(|| Error::InvalidLift {
                total: format!("{total}"),
            })?;
            Ok(InvariantReport {
                invariant: "divisor",
                model: "L",
                routes: alloc::vec![RouteValue {
                    id: "A/C",
                    value,
                }],
                constancy: Some(true),
                agree: Agreement::NotApplicable,
                components,
            })
        }
        Target::Q(model) => {
            let table = model
                .divisor_table
                .as_ref()
                .ok_or(Error::MissingDivisorTable)?;
            let (sum, components) = quotient_route_sum(model, table, Clone::clone)?;
            Ok(InvariantReport {
                invariant: "divisor",
                model: "Q",
                routes: alloc::vec![RouteValue {
                    id: "B",
                    value: -sum,
                }],
                constancy: None,
                agree: Agreement::NotApplicable,
                components,
            })
        }
    }
}

/// Result of the twisted computation at one index k: the localized
/// left-hand side against both right-hand-side forms.
#[derive(Clone, Debug)]
pub struct TwistedReport {
    pub k: usize,
    pub twist_order: usize,
    pub lhs: TorusRationalFn,
    pub rhs_printed: TorusRationalFn,
    pub rhs_variant: TorusRationalFn,
    pub lhs_matches_printed: bool,
    pub lhs_matches_variant: bool,
    pub components: Vec<ComponentLine>,
}

/// Assembles the twisted identity at index k: the localized left-hand
/// side, the printed right-hand side
/// -(1/48) I[ch_k c_top] + (1/24) I[ch_{k+1} S c_top] + (1/24) I[ch_{k+1} c_top],
/// and the variant with third term -(1/24) I[ch_{k+1} c_{top-1}].
pub fn twisted_invariant(model: &TargetModelL, k: usize) -> Result<TwistedReport> {
    let vars = model.vars();
    let mut lhs = TorusRationalFn::zero(vars);
    let mut components = Vec::new();
    for (idx, p) in model.points.iter().enumerate() {
        if p.bundle.is_none() {
            return Err(Error::MissingBundle {
                point: p.label.clone(),
            });
        }
        for c in model.point_components(idx)? {
            let term = twisted_component_term(model, &c, k)?;
            components.push(ComponentLine {
                key: c.key(model),
                fields: alloc::vec![
                    ("centralizer_order", format!("{}", c.centralizer_order())),
                    ("lhs_term", format!("{term}")),
                ],
            });
            lhs = lhs.add(&term);
        }
    }

    let half = Rat::new(1, 2);
    let chk_ctop_k = integrate_double_inertia(model, Selector::ChkCtop(k))?;
    let chk_ctop_k1 = integrate_double_inertia(model, Selector::ChkCtop(k + 1))?;
    let chk1_s_ctop = integrate_double_inertia(model, Selector::Chk1SCtop(k))?;
    let chk1_ctopm1 = integrate_double_inertia(model, Selector::Chk1CtopM1(k))?;

    let first_two = chk_ctop_k
        .scale(&-(psi_integral() * half))
        .add(&chk1_s_ctop.scale(&psi_integral()));
    let rhs_printed = first_two.add(&chk_ctop_k1.scale(&psi_integral()));
    let rhs_variant = first_two.add(&chk1_ctopm1.scale(&-psi_integral()));

    Ok(TwistedReport {
        k,
        twist_order: model.twist,
        lhs_matches_printed: lhs == rhs_printed,
        lhs_matches_variant: lhs == rhs_variant,
        lhs,
        rhs_printed,
        rhs_variant,
        components,
    })
}

/// Outcome of a cross-check entry. `Info` entries record observations
/// that are reported without being asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub name: String,
    pub outcome: Outcome,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.outcome != Outcome::Fail)
    }
}

fn push_check(entries: &mut Vec<CheckEntry>, name: String, pass: bool, witness: String) {
    entries.push(CheckEntry {
        name,
        outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        witness,
    });
}

/// Counting identities intrinsic to one finite group: the commuting
/// pair count against |G| * #classes, the orbit-stabilizer sum, the
/// partition of commuting pairs by generated subgroup, and the
/// component-wise degree equality of the two covering maps.
pub fn group_counting_checks(group: &FiniteGroup, prefix: &str) -> Vec<CheckEntry> {
    let mut entries = Vec::new();
    group_counting_checks_into(&mut entries, prefix, group);
    entries
}

fn group_counting_checks_into(entries: &mut Vec<CheckEntry>, prefix: &str, group: &FiniteGroup) {
    let pairs = group.commuting_pairs().len();
    let classes = group.conjugacy_classes().len();
    push_check(
        entries,
        format!("{prefix}commuting_pairs_vs_class_count"),
        pairs == group.order() * classes,
        format!("{pairs} = {} * {classes}", group.order()),
    );

    let orbit_sum: usize = group
        .bi_conjugacy_classes()
        .iter()
        .map(|c| group.order() / c.centralizer.order())
        .sum();
    push_check(
        entries,
        format!("{prefix}orbit_stabilizer_sum"),
        orbit_sum == pairs,
        format!("{orbit_sum} vs {pairs} commuting pairs"),
    );

    let bics = group.bicyclic_subgroups();
    let partition: usize = bics
        .classes
        .iter()
        .map(|c| c.conjugate_count() * c.generating_pairs)
        .sum();
    push_check(
        entries,
        format!("{prefix}commuting_pair_partition"),
        partition == pairs,
        format!("{partition} vs {pairs} commuting pairs"),
    );

    // degree equality: for each subgroup class, the generating-pair
    // count recovered from bi-conjugacy orbits (restricted to pairs
    // generating a conjugate, divided by the conjugate count) must
    // match the direct count
    for class in &bics.classes {
        let mut orbit_total = 0usize;
        for bc in group.bi_conjugacy_classes() {
            let gen = group
                .generated_bicyclic_subgroup(bc.rep.0, bc.rep.1)
                .expect("representatives commute");
            if bics.class_of(gen.elems()) == bics.class_of(class.rep.elems()) {
                orbit_total += bc.orbit_size;
            }
        }
        let conjugates = class.conjugate_count();
        let recovered_times = orbit_total;
        let direct_times = class.generating_pairs * conjugates;
        push_check(
            entries,
            format!("{prefix}covering_degree_equality[{}]", class.rep.key()),
            recovered_times == direct_times,
            format!(
                "{orbit_total} orbit pairs / {conjugates} conjugates vs {} generating pairs",
                class.generating_pairs
            ),
        );
    }
}

/// One independent unit of `cross_check` work. Tasks may run
/// concurrently; assembling their entries in task order is
/// deterministic.
pub struct CheckTask<'a> {
    pub name: String,
    pub run: alloc::boxed::Box<dyn Fn() -> Vec<CheckEntry> + Send + Sync + 'a>,
}

/// The full list of checks for one target, as independent tasks in
/// canonical order.
pub fn check_tasks(target: &Target) -> Vec<CheckTask<'_>> {
    let mut tasks: Vec<CheckTask<'_>> = Vec::new();
    match target {
        Target::Q(model) => {
            tasks.push(CheckTask {
                name: "group_counting".to_string(),
                run: alloc::boxed::Box::new(move || {
                    group_counting_checks(&model.group, "")
                }),
            });
            tasks.push(CheckTask {
                name: "dilaton_routes".to_string(),
                run: alloc::boxed::Box::new(move || {
                    alloc::vec![dilaton_agreement_entry(target)]
                }),
            });
            if model.divisor_table.is_some() {
                tasks.push(CheckTask {
                    name: "divisor".to_string(),
                    run: alloc::boxed::Box::new(move || {
                        let entry = match divisor_invariant(target) {
                            Ok(report) => CheckEntry {
                                name: "divisor_computable".to_string(),
                                outcome: Outcome::Pass,
                                witness: route_witness(&report),
                            },
                            Err(e) => CheckEntry {
                                name: "divisor_computable".to_string(),
                                outcome: Outcome::Fail,
                                witness: format!("{e}"),
                            },
                        };
                        alloc::vec![entry]
                    }),
                });
            }
        }
        Target::L(model) => {
            for p in &model.points {
                tasks.push(CheckTask {
                    name: format!("counting[{}]", p.label),
                    run: alloc::boxed::Box::new(move || {
                        group_counting_checks(&p.stabilizer, &format!("point[{}].", p.label))
                    }),
                });
            }
            tasks.push(CheckTask {
                name: "dilaton_routes".to_string(),
                run: alloc::boxed::Box::new(move || {
                    alloc::vec![dilaton_agreement_entry(target)]
                }),
            });
            tasks.push(CheckTask {
                name: "c_top_vs_class_count".to_string(),
                run: alloc::boxed::Box::new(move || {
                    alloc::vec![c_top_entry(model)]
                }),
            });
            if model.points.iter().all(|p| p.divisor_lift.is_some()) {
                tasks.push(CheckTask {
                    name: "divisor_constancy".to_string(),
                    run: alloc::boxed::Box::new(move || {
                        let entry = match divisor_invariant(target) {
                            Ok(report) => CheckEntry {
                                name: "divisor_lift_constancy".to_string(),
                                outcome: if report.constancy == Some(true) {
                                    Outcome::Pass
                                } else {
                                    Outcome::Fail
                                },
                                witness: route_witness(&report),
                            },
                            Err(e) => CheckEntry {
                                name: "divisor_lift_constancy".to_string(),
                                outcome: Outcome::Fail,
                                witness: format!("{e}"),
                            },
                        };
                        alloc::vec![entry]
                    }),
                });
            }
            if model.points.iter().all(|p| p.bundle.is_some()) {
                for k in 0..=2usize {
                    tasks.push(CheckTask {
                        name: format!("twisted[k={k}]"),
                        run: alloc::boxed::Box::new(move || twisted_check_entries(model, k)),
                    });
                }
            }
        }
    }
    tasks
}

/// Runs every applicable identity and route comparison for one target.
/// Failures become report entries, never errors.
pub fn cross_check(target: &Target) -> CheckReport {
    let mut entries = Vec::new();
    for task in check_tasks(target) {
        entries.extend((task.run)());
    }
    CheckReport { entries }
}

fn dilaton_agreement_entry(target: &Target) -> CheckEntry {
    match dilaton_invariant(target) {
        Ok(report) => CheckEntry {
            name: "dilaton_route_agreement".to_string(),
            outcome: if report.agree == Agreement::Agree {
                Outcome::Pass
            } else {
                Outcome::Fail
            },
            witness: route_witness(&report),
        },
        Err(e) => CheckEntry {
            name: "dilaton_route_agreement".to_string(),
            outcome: Outcome::Fail,
            witness: format!("{e}"),
        },
    }
}

/// The c_top localization total against the independently computed sum
/// of conjugacy-class counts.
fn c_top_entry(model: &TargetModelL) -> CheckEntry {
    let name = "c_top_integral_vs_class_count".to_string();
    match integrate_double_inertia(model, Selector::CTop) {
        Ok(total) => {
            let expected: usize = model
                .points
                .iter()
                .map(|p| p.stabilizer.conjugacy_classes().len())
                .sum();
            let pass = total.is_constant() == Some(Rat::from_int(expected as i64));
            CheckEntry {
                name,
                outcome: if pass { Outcome::Pass } else { Outcome::Fail },
                witness: format!("integral {total} vs {expected}"),
            }
        }
        Err(e) => CheckEntry {
            name,
            outcome: Outcome::Fail,
            witness: format!("{e}"),
        },
    }
}

/// The structural twisted identities at one index k: the left-hand
/// side matches the c_{top-1} variant, and the defect against the
/// printed form equals
/// -(1/24)(I[ch_{k+1} c_top] + I[ch_{k+1} c_{top-1}]).
/// Whether the printed form itself matches is recorded as information.
fn twisted_check_entries(model: &TargetModelL, k: usize) -> Vec<CheckEntry> {
    let mut entries = Vec::new();
    match (
        twisted_invariant(model, k),
        integrate_double_inertia(model, Selector::ChkCtop(k + 1)),
        integrate_double_inertia(model, Selector::Chk1CtopM1(k)),
    ) {
        (Ok(report), Ok(ctop_k1), Ok(ctopm1_k)) => {
            push_check(
                &mut entries,
                format!("twisted_lhs_matches_variant[k={k}]"),
                report.lhs_matches_variant,
                format!("lhs {} vs variant {}", report.lhs, report.rhs_variant),
            );
            let expected_defect = ctop_k1.add(&ctopm1_k).scale(&-psi_integral());
            let defect = report.lhs.sub(&report.rhs_printed);
            push_check(
                &mut entries,
                format!("twisted_printed_defect_identity[k={k}]"),
                defect == expected_defect,
                format!("defect {defect}"),
            );
            entries.push(CheckEntry {
                name: format!("twisted_lhs_matches_printed[k={k}]"),
                outcome: Outcome::Info,
                witness: format!("{}", report.lhs_matches_printed),
            });
        }
        (r, _, _) => {
            let msg = match r {
                Err(e) => format!("{e}"),
                Ok(_) => "selector integral failed".to_string(),
            };
            push_check(
                &mut entries,
                format!("twisted_lhs_matches_variant[k={k}]"),
                false,
                msg,
            );
        }
    }
    entries
}

fn route_witness(report: &InvariantReport) -> String {
    let parts: Vec<String> = report
        .routes
        .iter()
        .map(|r| format!("{}={}", r.id, r.value))
        .collect();
    parts.join(", ")
}
