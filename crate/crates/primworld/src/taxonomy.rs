//! Executable encodings of two published game-vs-simulator rubrics: the
//! seven-characteristic taxonomy of Narayanasamy et al. (2006) and the
//! intent/closeness criteria of Johnston & Whitehead (2009).
//!
//! An environment is described by a boolean [`EnvironmentProfile`]. The
//! Narayanasamy taxonomy checks the profile against three columns — Games,
//! Simulation Games, Training Simulators — row by row; the overall verdict is
//! the unique fully-matching column, or `None` when no column (or more than
//! one) matches. The Johnston–Whitehead criteria form a chain: a closed
//! formal system representing a subset of reality is a game; a game whose
//! primary goal is education is a serious game; a serious game that closely
//! resembles the skills of the user's own reality is a training simulation.
//!
//! Encoding choices for the taxonomy table: cells worded as "may" or
//! "possible" are wildcards (they never disqualify), and the sparse
//! Simulation-Games column inherits the Games column except for its one
//! explicit cell, "no obvious end state".

use std::fmt;

use serde::{Deserialize, Serialize};

/// Boolean profile of an environment under both rubrics.
///
/// The first thirteen fields encode the taxonomy table rows; the last four
/// feed the Johnston–Whitehead chain. `real_world_recreation_only` and
/// `fictitious_environment` are mutually exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentProfile {
    pub has_virtual_environment: bool,
    pub interactive_simulation: bool,
    pub fictitious_environment: bool,
    pub real_world_recreation_only: bool,
    pub intended_entertaining: bool,
    pub provides_engaging_challenges: bool,
    pub app_specific_skill_dev_primary: bool,
    pub continuous_intelligent_challenge: bool,
    pub challenges_match_real_world: bool,
    pub gameplay_patterns_present: bool,
    pub invariant_standard_procedures: bool,
    pub goal_oriented_activity: bool,
    pub end_state_present: bool,
    pub closed_formal_system: bool,
    pub represents_subset_of_reality: bool,
    pub primary_goal_education: bool,
    pub resembles_user_reality_skills: bool,
}

impl EnvironmentProfile {
    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.real_world_recreation_only && self.fictitious_environment {
            return Err(ProfileError::Contradictory(
                "real_world_recreation_only and fictitious_environment cannot both be true",
            ));
        }
        Ok(())
    }
}

/// Partially specified profile, as read from JSON. Every field must be given
/// before classification; `complete` reports the missing ones by name.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileDraft {
    pub has_virtual_environment: Option<bool>,
    pub interactive_simulation: Option<bool>,
    pub fictitious_environment: Option<bool>,
    pub real_world_recreation_only: Option<bool>,
    pub intended_entertaining: Option<bool>,
    pub provides_engaging_challenges: Option<bool>,
    pub app_specific_skill_dev_primary: Option<bool>,
    pub continuous_intelligent_challenge: Option<bool>,
    pub challenges_match_real_world: Option<bool>,
    pub gameplay_patterns_present: Option<bool>,
    pub invariant_standard_procedures: Option<bool>,
    pub goal_oriented_activity: Option<bool>,
    pub end_state_present: Option<bool>,
    pub closed_formal_system: Option<bool>,
    pub represents_subset_of_reality: Option<bool>,
    pub primary_goal_education: Option<bool>,
    pub resembles_user_reality_skills: Option<bool>,
}

impl ProfileDraft {
    pub fn complete(&self) -> Result<EnvironmentProfile, ProfileError> {
        let mut missing = Vec::new();
        macro_rules! field {
            ($name:ident) => {
                match self.$name {
                    Some(v) => v,
                    None => {
                        missing.push(stringify!($name));
                        false
                    }
                }
            };
        }
        let profile = EnvironmentProfile {
            has_virtual_environment: field!(has_virtual_environment),
            interactive_simulation: field!(interactive_simulation),
            fictitious_environment: field!(fictitious_environment),
            real_world_recreation_only: field!(real_world_recreation_only),
            intended_entertaining: field!(intended_entertaining),
            provides_engaging_challenges: field!(provides_engaging_challenges),
            app_specific_skill_dev_primary: field!(app_specific_skill_dev_primary),
            continuous_intelligent_challenge: field!(continuous_intelligent_challenge),
            challenges_match_real_world: field!(challenges_match_real_world),
            gameplay_patterns_present: field!(gameplay_patterns_present),
            invariant_standard_procedures: field!(invariant_standard_procedures),
            goal_oriented_activity: field!(goal_oriented_activity),
            end_state_present: field!(end_state_present),
            closed_formal_system: field!(closed_formal_system),
            represents_subset_of_reality: field!(represents_subset_of_reality),
            primary_goal_education: field!(primary_goal_education),
            resembles_user_reality_skills: field!(resembles_user_reality_skills),
        };
        if !missing.is_empty() {
            return Err(ProfileError::Incomplete { missing });
        }
        profile.validate()?;
        Ok(profile)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileError {
    /// One or more fields were not given; listed in declaration order.
    Incomplete { missing: Vec<&'static str> },
    Contradictory(&'static str),
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::Incomplete { missing } => {
                write!(f, "incomplete profile, missing: {}", missing.join(", "))
            }
            ProfileError::Contradictory(m) => write!(f, "contradictory profile: {m}"),
        }
    }
}

impl std::error::Error for ProfileError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NarayanasamyCategory {
    Game,
    SimulationGame,
    TrainingSimulator,
}

impl fmt::Display for NarayanasamyCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NarayanasamyCategory::Game => "Game",
            NarayanasamyCategory::SimulationGame => "SimulationGame",
            NarayanasamyCategory::TrainingSimulator => "TrainingSimulator",
        };
        f.write_str(s)
    }
}

/// Johnston–Whitehead verdict; later variants strictly imply earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum JohnstonWhitehead {
    NotAGame,
    Game,
    SeriousGame,
    TrainingSimulation,
}

impl fmt::Display for JohnstonWhitehead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            JohnstonWhitehead::NotAGame => "NotAGame",
            JohnstonWhitehead::Game => "Game",
            JohnstonWhitehead::SeriousGame => "SeriousGame",
            JohnstonWhitehead::TrainingSimulation => "TrainingSimulation",
        };
        f.write_str(s)
    }
}

/// One taxonomy row evaluated against all three columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowOutcome {
    pub row: u8,
    pub characteristic: &'static str,
    pub game: bool,
    pub simulation_game: bool,
    pub training_simulator: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NarayanasamyReport {
    pub rows: Vec<RowOutcome>,
    pub game: bool,
    pub simulation_game: bool,
    pub training_simulator: bool,
    pub overall: Option<NarayanasamyCategory>,
}

impl NarayanasamyReport {
    pub fn failing_rows(&self, category: NarayanasamyCategory) -> Vec<u8> {
        self.rows
            .iter()
            .filter(|r| match category {
                NarayanasamyCategory::Game => !r.game,
                NarayanasamyCategory::SimulationGame => !r.simulation_game,
                NarayanasamyCategory::TrainingSimulator => !r.training_simulator,
            })
            .map(|r| r.row)
            .collect()
    }
}

impl fmt::Display for NarayanasamyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Narayanasamy et al. taxonomy:")?;
        writeln!(
            f,
            "  {:<4}{:<30}{:<8}{:<10}simulator",
            "row", "characteristic", "game", "sim-game"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "  {:<4}{:<30}{:<8}{:<10}{}",
                r.row,
                r.characteristic,
                yn(r.game),
                yn(r.simulation_game),
                yn(r.training_simulator),
            )?;
        }
        for (name, cat, ok) in [
            ("Game", NarayanasamyCategory::Game, self.game),
            ("SimulationGame", NarayanasamyCategory::SimulationGame, self.simulation_game),
            ("TrainingSimulator", NarayanasamyCategory::TrainingSimulator, self.training_simulator),
        ] {
            if ok {
                writeln!(f, "  {name}: matches")?;
            } else {
                let rows: Vec<String> =
                    self.failing_rows(cat).iter().map(|r| r.to_string()).collect();
                writeln!(f, "  {name}: fails rows {}", rows.join(", "))?;
            }
        }
        match self.overall {
            Some(cat) => write!(f, "  overall: {cat}"),
            None => write!(f, "  overall: None"),
        }
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Both rubrics applied to one profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub narayanasamy: NarayanasamyReport,
    pub johnston_whitehead: JohnstonWhitehead,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.narayanasamy)?;
        write!(f, "Johnston-Whitehead: {}", self.johnston_whitehead)
    }
}

/// Evaluates the seven characteristics against each category column.
pub fn classify_narayanasamy(profile: &EnvironmentProfile) -> NarayanasamyReport {
    let p = profile;
    // Row 1 has a single filled column in the source table; involving
    // simulation is a prerequisite of all three categories.
    let involves = p.has_virtual_environment && p.interactive_simulation;
    let rows = vec![
        RowOutcome {
            row: 1,
            characteristic: "Involves simulation",
            game: involves,
            simulation_game: involves,
            training_simulator: involves,
        },
        RowOutcome {
            row: 2,
            characteristic: "Imaginative experience",
            // "May provide an imaginative or fictitious environment": a
            // wildcard for games either way.
            game: true,
            simulation_game: true,
            training_simulator: p.real_world_recreation_only,
        },
        RowOutcome {
            row: 3,
            characteristic: "Entertaining, fun & engaging",
            game: p.intended_entertaining && p.provides_engaging_challenges,
            simulation_game: p.intended_entertaining && p.provides_engaging_challenges,
            // "Operator can possibly find it entertaining" is a wildcard;
            // only the design intent disqualifies.
            training_simulator: !p.intended_entertaining,
        },
        RowOutcome {
            row: 4,
            characteristic: "Skills development",
            game: !p.app_specific_skill_dev_primary,
            simulation_game: !p.app_specific_skill_dev_primary,
            training_simulator: p.app_specific_skill_dev_primary,
        },
        RowOutcome {
            row: 5,
            characteristic: "Type of challenge",
            game: p.continuous_intelligent_challenge,
            simulation_game: p.continuous_intelligent_challenge,
            training_simulator: p.challenges_match_real_world,
        },
        RowOutcome {
            row: 6,
            characteristic: "Gestalt",
            game: p.gameplay_patterns_present,
            simulation_game: p.gameplay_patterns_present,
            training_simulator: p.invariant_standard_procedures,
        },
        RowOutcome {
            row: 7,
            characteristic: "Goal-oriented",
            game: p.goal_oriented_activity && p.end_state_present,
            // The one cell the table gives simulation games: no obvious end
            // state; the goal requirement is inherited.
            simulation_game: p.goal_oriented_activity && !p.end_state_present,
            training_simulator: !p.goal_oriented_activity && !p.end_state_present,
        },
    ];

    let game = rows.iter().all(|r| r.game);
    let simulation_game = rows.iter().all(|r| r.simulation_game);
    let training_simulator = rows.iter().all(|r| r.training_simulator);
    let overall = match (game, simulation_game, training_simulator) {
        (true, false, false) => Some(NarayanasamyCategory::Game),
        (false, true, false) => Some(NarayanasamyCategory::SimulationGame),
        (false, false, true) => Some(NarayanasamyCategory::TrainingSimulator),
        _ => None,
    };
    NarayanasamyReport { rows, game, simulation_game, training_simulator, overall }
}

/// Walks the intent/closeness chain.
pub fn classify_johnston_whitehead(profile: &EnvironmentProfile) -> JohnstonWhitehead {
    if !(profile.closed_formal_system && profile.represents_subset_of_reality) {
        return JohnstonWhitehead::NotAGame;
    }
    if !profile.primary_goal_education {
        return JohnstonWhitehead::Game;
    }
    if !profile.resembles_user_reality_skills {
        return JohnstonWhitehead::SeriousGame;
    }
    JohnstonWhitehead::TrainingSimulation
}

pub fn classify(profile: &EnvironmentProfile) -> Verdict {
    Verdict {
        narayanasamy: classify_narayanasamy(profile),
        johnston_whitehead: classify_johnston_whitehead(profile),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// A sprawling social virtual world: fictitious, meant to entertain, but
    /// with no set challenges, no fixed procedures, no goals, no end state.
    fn social_world() -> EnvironmentProfile {
        EnvironmentProfile {
            has_virtual_environment: true,
            interactive_simulation: true,
            fictitious_environment: true,
            real_world_recreation_only: false,
            intended_entertaining: true,
            provides_engaging_challenges: false,
            app_specific_skill_dev_primary: false,
            continuous_intelligent_challenge: false,
            challenges_match_real_world: false,
            gameplay_patterns_present: false,
            invariant_standard_procedures: false,
            goal_oriented_activity: false,
            end_state_present: false,
            closed_formal_system: true,
            represents_subset_of_reality: true,
            primary_goal_education: false,
            resembles_user_reality_skills: false,
        }
    }

    fn flight_trainer() -> EnvironmentProfile {
        EnvironmentProfile {
            has_virtual_environment: true,
            interactive_simulation: true,
            fictitious_environment: false,
            real_world_recreation_only: true,
            intended_entertaining: false,
            provides_engaging_challenges: false,
            app_specific_skill_dev_primary: true,
            continuous_intelligent_challenge: false,
            challenges_match_real_world: true,
            gameplay_patterns_present: false,
            invariant_standard_procedures: true,
            goal_oriented_activity: false,
            end_state_present: false,
            closed_formal_system: true,
            represents_subset_of_reality: true,
            primary_goal_education: true,
            resembles_user_reality_skills: true,
        }
    }

    fn arcade_game() -> EnvironmentProfile {
        EnvironmentProfile {
            has_virtual_environment: true,
            interactive_simulation: true,
            fictitious_environment: true,
            real_world_recreation_only: false,
            intended_entertaining: true,
            provides_engaging_challenges: true,
            app_specific_skill_dev_primary: false,
            continuous_intelligent_challenge: true,
            challenges_match_real_world: false,
            gameplay_patterns_present: true,
            invariant_standard_procedures: false,
            goal_oriented_activity: true,
            end_state_present: true,
            closed_formal_system: true,
            represents_subset_of_reality: true,
            primary_goal_education: false,
            resembles_user_reality_skills: false,
        }
    }

    #[test]
    fn social_world_fits_no_category() {
        let report = classify_narayanasamy(&social_world());
        assert_eq!(report.overall, None);
        assert!(!report.game && !report.simulation_game && !report.training_simulator);
        assert_eq!(report.failing_rows(NarayanasamyCategory::Game), vec![3, 5, 6, 7]);
        assert_eq!(
            report.failing_rows(NarayanasamyCategory::TrainingSimulator),
            vec![2, 3, 4, 5, 6]
        );
    }

    #[test]
    fn social_world_is_a_plain_game_under_intent_criteria() {
        assert_eq!(classify_johnston_whitehead(&social_world()), JohnstonWhitehead::Game);
    }

    #[test]
    fn full_game_column_yields_game() {
        let report = classify_narayanasamy(&arcade_game());
        assert_eq!(report.overall, Some(NarayanasamyCategory::Game));
        assert!(report.failing_rows(NarayanasamyCategory::Game).is_empty());
    }

    #[test]
    fn flight_trainer_matches_simulator_column_row_by_row() {
        let report = classify_narayanasamy(&flight_trainer());
        // Independent row-by-row derivation against the column definitions.
        let expected = [true, true, true, true, true, true, true];
        for (r, want) in report.rows.iter().zip(expected) {
            assert_eq!(r.training_simulator, want, "row {}", r.row);
        }
        assert_eq!(report.overall, Some(NarayanasamyCategory::TrainingSimulator));
        // And the game column must fail on intent (row 3) among others.
        assert!(report.failing_rows(NarayanasamyCategory::Game).contains(&3));
    }

    #[test]
    fn simulation_game_needs_goals_without_end_state() {
        let endless = EnvironmentProfile {
            end_state_present: false,
            ..arcade_game()
        };
        let report = classify_narayanasamy(&endless);
        assert_eq!(report.overall, Some(NarayanasamyCategory::SimulationGame));
    }

    #[test]
    fn intent_chain_examples() {
        // Education + resembles lab skills: training simulation.
        assert_eq!(
            classify_johnston_whitehead(&flight_trainer()),
            JohnstonWhitehead::TrainingSimulation
        );
        // Education about a phenomenon outside the user's own skills.
        let concept_sim = EnvironmentProfile {
            resembles_user_reality_skills: false,
            ..flight_trainer()
        };
        assert_eq!(
            classify_johnston_whitehead(&concept_sim),
            JohnstonWhitehead::SeriousGame
        );
        // Not a closed formal system: not a game at all.
        let open = EnvironmentProfile { closed_formal_system: false, ..social_world() };
        assert_eq!(classify_johnston_whitehead(&open), JohnstonWhitehead::NotAGame);
    }

    #[test]
    fn intent_chain_is_monotone_over_all_combinations() {
        // Exhaustive over the four relevant booleans; the rest are fixed.
        for bits in 0..16u8 {
            let p = EnvironmentProfile {
                closed_formal_system: bits & 1 != 0,
                represents_subset_of_reality: bits & 2 != 0,
                primary_goal_education: bits & 4 != 0,
                resembles_user_reality_skills: bits & 8 != 0,
                ..social_world()
            };
            let v = classify_johnston_whitehead(&p);
            let game_gate = p.closed_formal_system && p.represents_subset_of_reality;
            if v >= JohnstonWhitehead::Game {
                assert!(game_gate);
            }
            if v >= JohnstonWhitehead::SeriousGame {
                assert!(game_gate && p.primary_goal_education);
            }
            if v == JohnstonWhitehead::TrainingSimulation {
                assert!(game_gate && p.primary_goal_education && p.resembles_user_reality_skills);
            }
        }
    }

    #[test]
    fn draft_lists_missing_fields() {
        let err = ProfileDraft::default().complete().unwrap_err();
        match err {
            ProfileError::Incomplete { missing } => {
                assert_eq!(missing.len(), 17);
                assert_eq!(missing[0], "has_virtual_environment");
                assert_eq!(missing[16], "resembles_user_reality_skills");
            }
            other => panic!("expected incomplete, got {other}"),
        }

        let draft = ProfileDraft {
            has_virtual_environment: Some(true),
            ..ProfileDraft::default()
        };
        match draft.complete().unwrap_err() {
            ProfileError::Incomplete { missing } => {
                assert_eq!(missing.len(), 16);
                assert!(!missing.contains(&"has_virtual_environment"));
            }
            other => panic!("expected incomplete, got {other}"),
        }
    }

    #[test]
    fn contradictory_profile_rejected() {
        let p = EnvironmentProfile {
            real_world_recreation_only: true,
            fictitious_environment: true,
            ..social_world()
        };
        assert!(matches!(p.validate(), Err(ProfileError::Contradictory(_))));
    }

    #[test]
    fn profile_json_round_trip_and_unknown_field() {
        let p = social_world();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"app_specific_skill_dev_primary\":false"));
        let back: EnvironmentProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);

        let bad = r#"{"has_virtual_environment": true, "is_fun": true}"#;
        assert!(serde_json::from_str::<ProfileDraft>(bad).is_err());
    }

    fn profile_strategy() -> impl Strategy<Value = EnvironmentProfile> {
        proptest::collection::vec(any::<bool>(), 17).prop_map(|b| {
            let mut p = EnvironmentProfile {
                has_virtual_environment: b[0],
                interactive_simulation: b[1],
                fictitious_environment: b[2],
                real_world_recreation_only: b[3],
                intended_entertaining: b[4],
                provides_engaging_challenges: b[5],
                app_specific_skill_dev_primary: b[6],
                continuous_intelligent_challenge: b[7],
                challenges_match_real_world: b[8],
                gameplay_patterns_present: b[9],
                invariant_standard_procedures: b[10],
                goal_oriented_activity: b[11],
                end_state_present: b[12],
                closed_formal_system: b[13],
                represents_subset_of_reality: b[14],
                primary_goal_education: b[15],
                resembles_user_reality_skills: b[16],
            };
            // Keep the invariant without biasing the rest.
            if p.real_world_recreation_only && p.fictitious_environment {
                p.real_world_recreation_only = false;
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn overall_implies_full_column(p in profile_strategy()) {
            let report = classify_narayanasamy(&p);
            if let Some(cat) = report.overall {
                prop_assert!(report.failing_rows(cat).is_empty());
                // Unique match: the other two columns must not fully match.
                let full = [report.game, report.simulation_game, report.training_simulator]
                    .iter()
                    .filter(|b| **b)
                    .count();
                prop_assert_eq!(full, 1);
            }
            prop_assert!(p.validate().is_ok());
        }

        #[test]
        fn chain_is_total_and_monotone(p in profile_strategy()) {
            let v = classify_johnston_whitehead(&p);
            if v >= JohnstonWhitehead::SeriousGame {
                prop_assert!(p.primary_goal_education);
            }
            if v >= JohnstonWhitehead::Game {
                prop_assert!(p.closed_formal_system && p.represents_subset_of_reality);
            }
        }
    }
}
