//! The 2x2 allure/ignore game played by one pair of agents.
//!
//! Mutual alluring pays each side its cooperative satisfaction. Ignoring pays
//! the reservation level `beta`, and alluring an agent that ignores you pays
//! the frustrated level `beta * gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{acceptable, Agent, FrustrationState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Allure,
    Ignore,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Allure, Action::Ignore];

    fn index(self) -> usize {
        match self {
            Action::Allure => 0,
            Action::Ignore => 1,
        }
    }

    fn flip(self) -> Action {
        match self {
            Action::Allure => Action::Ignore,
            Action::Ignore => Action::Allure,
        }
    }
}

/// What one player knows about its side of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilateralView {
    satisfaction: f64,
    beta: f64,
    gamma: f64,
}

impl BilateralView {
    pub fn new(satisfaction: f64, beta: f64, gamma: f64) -> Result<Self> {
        let bad = |field, value, constraint| Error::Parameter {
            agent: None,
            field,
            value,
            constraint,
        };
        if !(satisfaction > 0.0 && satisfaction <= 1.0) {
            return Err(bad("satisfaction", satisfaction, "must lie in (0, 1]"));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(bad("beta", beta, "must lie in (0, 1)"));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(bad("gamma", gamma, "must lie in (0, 1)"));
        }
        Ok(BilateralView {
            satisfaction,
            beta,
            gamma,
        })
    }

    /// `agent`'s view of cooperating with `partner`. Earlier failures scale
    /// beta to `beta * gamma^m` before the matrix applies one more gamma.
    pub fn from_agents(agent: &Agent, partner: &Agent, frustration: &FrustrationState) -> Result<Self> {
        let s = agent.satisfaction(partner.offer())?;
        BilateralView::new(s, agent.reservation(frustration.m()), agent.gamma())
    }

    pub fn satisfaction(&self) -> f64 {
        self.satisfaction
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Payoffs indexed by (row action, column action); each cell is
/// `(row payoff, column payoff)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SatisfactionMatrix2x2 {
    cells: [[(f64, f64); 2]; 2],
}

impl SatisfactionMatrix2x2 {
    pub fn cell(&self, row: Action, col: Action) -> (f64, f64) {
        self.cells[row.index()][col.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EquilibriumProfile {
    pub row: Action,
    pub col: Action,
}

impl EquilibriumProfile {
    pub const MUTUAL_ALLURE: Self = EquilibriumProfile {
        row: Action::Allure,
        col: Action::Allure,
    };
    pub const MUTUAL_IGNORE: Self = EquilibriumProfile {
        row: Action::Ignore,
        col: Action::Ignore,
    };
}

pub fn build_matrix(row: &BilateralView, col: &BilateralView) -> SatisfactionMatrix2x2 {
    use Action::*;
    let mut cells = [[(0.0, 0.0); 2]; 2];
    cells[Allure.index()][Allure.index()] = (row.satisfaction, col.satisfaction);
    cells[Allure.index()][Ignore.index()] = (row.beta * row.gamma, col.beta);
    cells[Ignore.index()][Allure.index()] = (row.beta, col.beta * col.gamma);
    cells[Ignore.index()][Ignore.index()] = (row.beta, col.beta);
    SatisfactionMatrix2x2 { cells }
}

/// Profiles where no player strictly gains by deviating alone.
pub fn pure_equilibria(matrix: &SatisfactionMatrix2x2) -> Vec<EquilibriumProfile> {
    let mut out = Vec::new();
    for row in Action::ALL {
        for col in Action::ALL {
            let (r, c) = matrix.cell(row, col);
            let row_dev = matrix.cell(row.flip(), col).0;
            let col_dev = matrix.cell(row, col.flip()).1;
            if row_dev <= r && col_dev <= c {
                out.push(EquilibriumProfile { row, col });
            }
        }
    }
    out
}

/// Both sides strictly prefer each other's offer to staying alone.
pub fn cooperation_viable(
    a: &Agent,
    b: &Agent,
    fa: &FrustrationState,
    fb: &FrustrationState,
) -> Result<bool> {
    Ok(acceptable(a, b.offer(), fa)? && acceptable(b, a.offer(), fb)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;
    use proptest::prelude::*;

    fn view(s: f64, beta: f64, gamma: f64) -> BilateralView {
        BilateralView::new(s, beta, gamma).unwrap()
    }

    // Independent best-response enumeration: for each cell, list every
    // alternative action of each player and compare payoffs.
    fn brute_equilibria(m: &SatisfactionMatrix2x2) -> Vec<EquilibriumProfile> {
        let mut out = Vec::new();
        for r in Action::ALL {
            for c in Action::ALL {
                let (pr, pc) = m.cell(r, c);
                let row_best = Action::ALL.iter().all(|&alt| m.cell(alt, c).0 <= pr);
                let col_best = Action::ALL.iter().all(|&alt| m.cell(r, alt).1 <= pc);
                if row_best && col_best {
                    out.push(EquilibriumProfile { row: r, col: c });
                }
            }
        }
        out
    }

    #[test]
    fn build_matrix_example() {
        use Action::*;
        let m = build_matrix(&view(0.8, 0.1, 0.5), &view(0.6, 0.2, 0.5));
        assert_eq!(m.cell(Allure, Allure), (0.8, 0.6));
        assert_eq!(m.cell(Allure, Ignore), (0.05, 0.2));
        assert_eq!(m.cell(Ignore, Allure), (0.1, 0.1));
        assert_eq!(m.cell(Ignore, Ignore), (0.1, 0.2));
    }

    #[test]
    fn symmetric_at_reservation() {
        let m = build_matrix(&view(0.3, 0.3, 0.5), &view(0.3, 0.3, 0.5));
        assert_eq!(m.cell(Action::Allure, Action::Allure), (0.3, 0.3));
    }

    #[test]
    fn gamma_one_rejected() {
        assert!(BilateralView::new(0.5, 0.1, 1.0).is_err());
        assert!(BilateralView::new(0.0, 0.1, 0.5).is_err());
        assert!(BilateralView::new(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn equilibria_examples() {
        let both = pure_equilibria(&build_matrix(&view(0.8, 0.1, 0.5), &view(0.6, 0.2, 0.5)));
        assert_eq!(both, vec![EquilibriumProfile::MUTUAL_ALLURE, EquilibriumProfile::MUTUAL_IGNORE]);

        let ignore_only = pure_equilibria(&build_matrix(&view(0.05, 0.1, 0.5), &view(0.6, 0.2, 0.5)));
        assert_eq!(ignore_only, vec![EquilibriumProfile::MUTUAL_IGNORE]);

        let boundary = pure_equilibria(&build_matrix(&view(0.1, 0.1, 0.5), &view(0.6, 0.2, 0.5)));
        assert_eq!(boundary, vec![EquilibriumProfile::MUTUAL_ALLURE, EquilibriumProfile::MUTUAL_IGNORE]);
    }

    fn seesaw(id: u32, x: f64, beta: f64) -> Agent {
        let p = Point::new(vec![x]).unwrap();
        Agent::new(id, p.clone(), p, 1.0, beta, 0.5).unwrap()
    }

    #[test]
    fn viability_examples() {
        let (a, b) = (seesaw(1, 0.0, 0.1), seesaw(2, 0.0, 0.1));
        let (fa, fb) = (FrustrationState::new(a.id()), FrustrationState::new(b.id()));
        assert!(cooperation_viable(&a, &b, &fa, &fb).unwrap());

        // radius at beta=0.1, alpha=1 is ~1.517; distance 3 is outside
        let far = seesaw(3, 3.0, 0.1);
        let ff = FrustrationState::new(far.id());
        assert!(!cooperation_viable(&a, &far, &fa, &ff).unwrap());

        // both exactly at reservation: distance 1, beta = e^-1
        let level = (-1.0f64).exp();
        let (c, d) = (seesaw(4, 0.0, level), seesaw(5, 1.0, level));
        let (fc, fd) = (FrustrationState::new(c.id()), FrustrationState::new(d.id()));
        assert!(!cooperation_viable(&c, &d, &fc, &fd).unwrap());
    }

    #[test]
    fn view_from_agents_scales_beta_by_frustration() {
        let (a, b) = (seesaw(1, 0.0, 0.2), seesaw(2, 0.0, 0.1));
        let v = BilateralView::from_agents(&a, &b, &FrustrationState::with_failures(a.id(), 2)).unwrap();
        assert_eq!(v.satisfaction(), 1.0);
        assert_eq!(v.beta(), 0.2 * 0.5 * 0.5);
    }

    proptest! {
        #[test]
        fn equilibria_match_best_response_enumeration(
            s1 in 1e-6f64..=1.0, b1 in 1e-6f64..0.999999, g1 in 1e-6f64..0.999999,
            s2 in 1e-6f64..=1.0, b2 in 1e-6f64..0.999999, g2 in 1e-6f64..0.999999,
        ) {
            let m = build_matrix(&view(s1, b1, g1), &view(s2, b2, g2));
            let eq = pure_equilibria(&m);
            prop_assert_eq!(&eq, &brute_equilibria(&m));
            prop_assert!(eq.contains(&EquilibriumProfile::MUTUAL_IGNORE));
            prop_assert!(eq.len() <= 2);
            prop_assert_eq!(eq.contains(&EquilibriumProfile::MUTUAL_ALLURE), s1 >= b1 && s2 >= b2);
        }
    }
}
