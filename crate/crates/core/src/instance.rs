//! DSIRS instances: two agents with additive utilities over indivisible
//! resources, per-resource sale prices and selling costs, and a budget.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::{ResourceSet, MAX_RESOURCES};

/// Largest magnitude accepted for any utility, price or cost. Keeps every
/// cross-multiplied welfare comparison inside `u128`.
pub const MAX_VALUE: u64 = 1 << 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("UnequalTotals: agent 1 values R at {u1} but agent 2 at {u2}")]
    UnequalTotals { u1: u64, u2: u64 },
    #[error("PriceExceedsMaxUtility: resource {resource:?} has price {price} above max(u1, u2) = {max}")]
    PriceExceedsMaxUtility { resource: String, price: u64, max: u64 },
    #[error("NegativeValue: field {field:?} of {resource:?} is {value}")]
    NegativeValue {
        resource: String,
        field: &'static str,
        value: i64,
    },
    #[error("DuplicateName: resource name {0:?} appears more than once")]
    DuplicateName(String),
    #[error("TooManyResources: {0} resources given, at most {MAX_RESOURCES} supported")]
    TooManyResources(usize),
    #[error("ValueTooLarge: field {field:?} of {resource:?} exceeds {MAX_VALUE}")]
    ValueTooLarge { resource: String, field: &'static str },
    #[error("Malformed: {0}")]
    Malformed(String),
}

/// Selling cost of a resource.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cost {
    Finite(u64),
    /// Never fits any budget, not even an unlimited one.
    Unsellable,
}

impl Cost {
    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Finite(c) => Some(c),
            Cost::Unsellable => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    Finite(u64),
    Unlimited,
}

impl Budget {
    pub fn admits(self, total_cost: u64) -> bool {
        match self {
            Budget::Finite(b) => total_cost <= b,
            Budget::Unlimited => true,
        }
    }

    /// Budget left after spending `cost`, or `None` if it does not fit.
    pub fn spend(self, cost: Cost) -> Option<Budget> {
        match (self, cost) {
            (_, Cost::Unsellable) => None,
            (Budget::Unlimited, _) => Some(Budget::Unlimited),
            (Budget::Finite(b), Cost::Finite(c)) => b.checked_sub(c).map(Budget::Finite),
        }
    }

    pub fn is_positive(self) -> bool {
        !matches!(self, Budget::Finite(0))
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Finite(b) => write!(f, "{b}"),
            Budget::Unlimited => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resource {
    pub name: String,
    pub u1: u64,
    pub u2: u64,
    pub price: u64,
    pub cost: Cost,
}

impl Resource {
    pub fn new(name: impl Into<String>, u1: u64, u2: u64, price: u64, cost: Cost) -> Self {
        Resource {
            name: name.into(),
            u1,
            u2,
            price,
            cost,
        }
    }

    pub fn utility(&self, agent: Agent) -> u64 {
        match agent {
            Agent::One => self.u1,
            Agent::Two => self.u2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Agent {
    One,
    Two,
}

impl Agent {
    pub fn other(self) -> Agent {
        match self {
            Agent::One => Agent::Two,
            Agent::Two => Agent::One,
        }
    }
}

/// A validated DSIRS instance. Instances obtained from [`Instance::presell`]
/// are the one exception: they relax the common-scale and price invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    resources: Vec<Resource>,
    budget: Budget,
}

impl Instance {
    pub fn new(resources: Vec<Resource>, budget: Budget) -> Result<Self, InstanceError> {
        let instance = Instance { resources, budget };
        instance.check()?;
        Ok(instance)
    }

    fn check(&self) -> Result<(), InstanceError> {
        if self.resources.len() > MAX_RESOURCES {
            return Err(InstanceError::TooManyResources(self.resources.len()));
        }
        let mut seen = HashSet::new();
        for r in &self.resources {
            if !seen.insert(r.name.as_str()) {
                return Err(InstanceError::DuplicateName(r.name.clone()));
            }
        }
        for r in &self.resources {
            let fields = [
                ("u1", Some(r.u1)),
                ("u2", Some(r.u2)),
                ("p", Some(r.price)),
                ("c", r.cost.finite()),
            ];
            for (field, value) in fields {
                if value.is_some_and(|v| v > MAX_VALUE) {
                    return Err(InstanceError::ValueTooLarge {
                        resource: r.name.clone(),
                        field,
                    });
                }
            }
            let max = r.u1.max(r.u2);
            if r.price > max {
                return Err(InstanceError::PriceExceedsMaxUtility {
                    resource: r.name.clone(),
                    price: r.price,
                    max,
                });
            }
        }
        let (u1, u2) = (self.total(Agent::One), self.total(Agent::Two));
        if u1 != u2 {
            return Err(InstanceError::UnequalTotals { u1, u2 });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.resources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resources.is_empty()
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn resource(&self, i: usize) -> &Resource {
        &self.resources[i]
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn all(&self) -> ResourceSet {
        ResourceSet::full(self.len())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.resources.iter().position(|r| r.name == name)
    }

    pub fn total(&self, agent: Agent) -> u64 {
        self.resources.iter().map(|r| r.utility(agent)).sum()
    }

    pub fn utility(&self, agent: Agent, set: ResourceSet) -> u64 {
        set.iter().map(|i| self.resources[i].utility(agent)).sum()
    }

    pub fn price(&self, set: ResourceSet) -> u64 {
        set.iter().map(|i| self.resources[i].price).sum()
    }

    /// Total selling cost, `None` when the set holds an unsellable resource.
    pub fn cost(&self, set: ResourceSet) -> Option<u64> {
        set.iter().map(|i| self.resources[i].cost.finite()).sum::<Option<u64>>()
    }

    /// Whether selling exactly `set` fits the budget.
    pub fn affordable(&self, set: ResourceSet) -> bool {
        self.cost(set).is_some_and(|c| self.budget.admits(c))
    }

    /// Indices of resources that could be sold on their own.
    pub fn sellable(&self) -> ResourceSet {
        (0..self.len())
            .filter(|&i| self.affordable(ResourceSet::singleton(i)))
            .collect()
    }

    pub fn names(&self, set: ResourceSet) -> Vec<String> {
        set.iter().map(|i| self.resources[i].name.clone()).collect()
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ResourceSet, String> {
        names
            .iter()
            .map(|n| self.index_of(n.as_ref()).ok_or_else(|| n.as_ref().to_string()))
            .collect()
    }

    /// The same instance with agent names interchanged.
    pub fn swapped(&self) -> Instance {
        let resources = self
            .resources
            .iter()
            .map(|r| Resource {
                u1: r.u2,
                u2: r.u1,
                ..r.clone()
            })
            .collect();
        Instance {
            resources,
            budget: self.budget,
        }
    }

    pub fn with_budget(&self, budget: Budget) -> Instance {
        Instance {
            resources: self.resources.clone(),
            budget,
        }
    }

    /// Marks every resource of `set` unsellable.
    pub fn with_unsellable(&self, set: ResourceSet) -> Instance {
        let mut out = self.clone();
        for i in set.iter() {
            out.resources[i].cost = Cost::Unsellable;
        }
        out
    }

    /// Commits to selling `set`: each resource is replaced by a placeholder with
    /// zero utilities and zero cost that keeps its price, and the budget is
    /// charged for the sale. Returns `None` when the sale does not fit.
    ///
    /// Selling a placeholder is never worse than allocating it, so solving the
    /// returned instance and mapping every placeholder back into the sold set
    /// yields plans of the original instance.
    pub fn presell(&self, set: ResourceSet) -> Option<Instance> {
        let spent = self.cost(set)?;
        let budget = self.budget.spend(Cost::Finite(spent))?;
        let mut resources = self.resources.clone();
        for i in set.iter() {
            let r = &mut resources[i];
            r.u1 = 0;
            r.u2 = 0;
            r.cost = Cost::Finite(0);
        }
        Some(Instance { resources, budget })
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            budget: match self.budget {
                Budget::Finite(b) => RawAmount::Int(b as i64),
                Budget::Unlimited => RawAmount::Text("inf".into()),
            },
            resources: self
                .resources
                .iter()
                .map(|r| RawResource {
                    name: r.name.clone(),
                    u1: r.u1 as i64,
                    u2: r.u2 as i64,
                    p: r.price as i64,
                    c: match r.cost {
                        Cost::Finite(c) => RawAmount::Int(c as i64),
                        Cost::Unsellable => RawAmount::Text("inf".into()),
                    },
                })
                .collect(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Instance, InstanceError> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| InstanceError::Malformed(format!("instance JSON: {e}")))?;
        validate_instance(raw)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("instance serializes")
    }
}

/// Integer or the literal `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawAmount {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawResource {
    pub name: String,
    pub u1: i64,
    pub u2: i64,
    pub p: i64,
    pub c: RawAmount,
}

/// Instance as read from JSON, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance {
    pub budget: RawAmount,
    pub resources: Vec<RawResource>,
}

fn nonnegative(resource: &str, field: &'static str, value: i64) -> Result<u64, InstanceError> {
    u64::try_from(value).map_err(|_| InstanceError::NegativeValue {
        resource: resource.to_string(),
        field,
        value,
    })
}

fn amount(resource: &str, field: &'static str, raw: &RawAmount) -> Result<Option<u64>, InstanceError> {
    match raw {
        RawAmount::Int(v) => nonnegative(resource, field, *v).map(Some),
        RawAmount::Text(t) if t == "inf" => Ok(None),
        RawAmount::Text(t) => Err(InstanceError::Malformed(format!(
            "field {field:?} of {resource:?} must be an integer or \"inf\", got {t:?}"
        ))),
    }
}

/// Checks every instance invariant and converts to the typed form.
pub fn validate_instance(raw: RawInstance) -> Result<Instance, InstanceError> {
    let budget = match amount("budget", "budget", &raw.budget)? {
        Some(b) => Budget::Finite(b),
        None => Budget::Unlimited,
    };
    let mut resources = Vec::with_capacity(raw.resources.len());
    for r in &raw.resources {
        let name = r.name.as_str();
        resources.push(Resource {
            name: r.name.clone(),
            u1: nonnegative(name, "u1", r.u1)?,
            u2: nonnegative(name, "u2", r.u2)?,
            price: nonnegative(name, "p", r.p)?,
            cost: match amount(name, "c", &r.c)? {
                Some(c) => Cost::Finite(c),
                None => Cost::Unsellable,
            },
        });
    }
    Instance::new(resources, budget)
}
