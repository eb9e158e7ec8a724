use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OpenDynamic;
use crate::error::{Error, Result};

/// A sampled run: `(time, state)` pairs starting at `(ρ(start), start)`.
/// `dead_end` is the index of the schedule step whose image was empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub steps: Vec<(String, String)>,
    pub dead_end: Option<usize>,
}

/// Follows `schedule` from `start`, choosing uniformly among successors with a seeded RNG.
pub fn sample_trajectory(a: &OpenDynamic, lam: &str, start: &str, schedule: &[&str], seed: u64) -> Result<Trajectory> {
    let alpha = a.alpha();
    let engine = alpha.engine();
    if !alpha.params().contains(lam) {
        return Err(Error::UnknownParameter(lam.to_string()));
    }
    let owner = alpha
        .owner(start)
        .ok_or_else(|| Error::UnknownState(start.to_string()))?;
    let mut expected = owner.to_string();
    for d in schedule {
        let arrow = engine.arrow(d)?;
        if arrow.dom != expected {
            return Err(Error::Shape(format!(
                "arrow '{d}' starts at '{}' but the trajectory is at '{expected}'",
                arrow.dom
            )));
        }
        expected = arrow.cod.clone();
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut time = a.date(start).expect("ρ is total").to_string();
    let mut state = start.to_string();
    let mut steps = vec![(time.clone(), state.clone())];
    for (i, d) in schedule.iter().enumerate() {
        let next: Vec<&str> = alpha.transition(d, lam)?.image(&state)?.collect();
        if next.is_empty() {
            return Ok(Trajectory {
                steps,
                dead_end: Some(i),
            });
        }
        state = next[rng.gen_range(0..next.len())].to_string();
        time = a.clock().apply(d, &time)?.to_string();
        steps.push((time.clone(), state.clone()));
    }
    Ok(Trajectory { steps, dead_end: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::worked_instance;

    #[test]
    fn worked_run() {
        let a = worked_instance();
        let run = sample_trajectory(&a, "λ1", "a", &["d01"], 7).unwrap();
        assert_eq!(run.dead_end, None);
        assert_eq!(
            run.steps,
            [("t0".to_string(), "a".to_string()), ("t1".to_string(), "b".to_string())]
        );
    }

    #[test]
    fn dead_end_and_shape_errors() {
        let a = worked_instance();
        let run = sample_trajectory(&a, "λ1", "b'", &["id_1"], 0).unwrap();
        assert_eq!(run.dead_end, None);
        assert!(matches!(
            sample_trajectory(&a, "λ1", "b", &["d01"], 0),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            sample_trajectory(&a, "λ1", "zz", &[], 0),
            Err(Error::UnknownState(_))
        ));
    }
}
