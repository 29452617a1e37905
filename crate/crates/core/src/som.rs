//! One-dimensional Kohonen map that places the seven triangle vertices of an
//! input from its scalar training values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membership::{equal_spacing, CURVES};
use crate::scalar::Real;
use crate::train::EpochOrder;

/// Learning-rate and neighbourhood schedule, both decaying linearly per epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SomSchedule {
    pub initial_rate: f64,
    pub final_rate: f64,
    pub initial_radius: usize,
    pub epochs: usize,
}

impl Default for SomSchedule {
    fn default() -> Self {
        SomSchedule { initial_rate: 0.5, final_rate: 0.01, initial_radius: 1, epochs: 50 }
    }
}

impl SomSchedule {
    pub fn validate(&self) -> Result<()> {
        let in_unit = |r: f64| (0.0..=1.0).contains(&r);
        if !in_unit(self.initial_rate) || !in_unit(self.final_rate) {
            return Err(Error::InvalidConfig(format!(
                "SOM rates must lie in [0, 1], got {} -> {}",
                self.initial_rate, self.final_rate
            )));
        }
        if self.final_rate > self.initial_rate {
            return Err(Error::InvalidConfig("SOM final_rate exceeds initial_rate".into()));
        }
        if self.initial_radius > CURVES - 1 {
            return Err(Error::InvalidConfig(format!(
                "SOM radius must be at most {}, got {}",
                CURVES - 1,
                self.initial_radius
            )));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("SOM epochs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn rate(&self, epoch: usize) -> f64 {
        if self.epochs <= 1 {
            return self.initial_rate;
        }
        let t = epoch as f64 / (self.epochs - 1) as f64;
        self.initial_rate + (self.final_rate - self.initial_rate) * t
    }

    /// Neighbourhood radius, rounded to nearest, reaching 0 on the last epoch.
    pub fn radius(&self, epoch: usize) -> usize {
        if self.epochs <= 1 {
            return self.initial_radius;
        }
        let span = self.epochs - 1;
        let remaining = span - epoch.min(span);
        (self.initial_radius * remaining + span / 2) / span
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SomState<T> {
    prototypes: [T; CURVES],
    domain_min: T,
    domain_max: T,
}

/// Trained map plus the prototype order before the final sort.
#[derive(Debug, Clone, PartialEq)]
pub struct SomOutcome<T> {
    pub state: SomState<T>,
    pub pre_sort: [T; CURVES],
}

impl<T> SomOutcome<T>
where
    T: Real,
{
    /// True when training left neighbouring prototypes out of order.
    pub fn crossed(&self) -> bool {
        self.pre_sort.windows(2).any(|w| w[1] < w[0])
    }
}

impl<T: Real> SomState<T> {
    /// Prototypes equally spaced over the domain.
    pub fn init(domain_min: T, domain_max: T) -> Result<Self> {
        if !(domain_min < domain_max && domain_min.is_finite() && domain_max.is_finite()) {
            return Err(Error::InvalidDomain { min: domain_min.as_f64(), max: domain_max.as_f64() });
        }
        Ok(SomState { prototypes: equal_spacing(domain_min, domain_max), domain_min, domain_max })
    }

    pub fn prototypes(&self) -> [T; CURVES] {
        self.prototypes
    }

    pub fn domain(&self) -> (T, T) {
        (self.domain_min, self.domain_max)
    }

    /// Index of the nearest prototype; the lowest index wins ties.
    pub fn winner(&self, x: T) -> usize {
        let mut best = 0;
        let mut best_dist = (x - self.prototypes[0]).abs();
        for (k, &p) in self.prototypes.iter().enumerate().skip(1) {
            let d = (x - p).abs();
            if d < best_dist {
                best = k;
                best_dist = d;
            }
        }
        best
    }

    /// Moves the winner and its neighbours within `radius` toward `x`.
    pub fn update(&mut self, x: T, rate: T, radius: usize) -> usize {
        let w = self.winner(x);
        let lo = w.saturating_sub(radius);
        let hi = (w + radius).min(CURVES - 1);
        for p in &mut self.prototypes[lo..=hi] {
            *p = *p + rate * (x - *p);
        }
        w
    }

    pub fn train(&self, samples: &[T], schedule: &SomSchedule, seed: u64) -> Result<SomOutcome<T>> {
        schedule.validate()?;
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        if let Some(&bad) = samples.iter().find(|&&x| !(x >= self.domain_min && x <= self.domain_max)) {
            return Err(Error::OutOfDomain {
                value: bad.as_f64(),
                min: self.domain_min.as_f64(),
                max: self.domain_max.as_f64(),
            });
        }

        let mut state = self.clone();
        let mut order = EpochOrder::new(samples.len(), seed);
        for epoch in 0..schedule.epochs {
            let rate = T::lit(schedule.rate(epoch));
            let radius = schedule.radius(epoch);
            for &i in order.next_epoch(samples.len()) {
                state.update(samples[i], rate, radius);
            }
        }

        let pre_sort = state.prototypes;
        for p in &mut state.prototypes {
            if *p < state.domain_min {
                *p = state.domain_min;
            } else if *p > state.domain_max {
                *p = state.domain_max;
            }
        }
        state.prototypes.sort_by(|a, b| a.partial_cmp(b).expect("prototypes are finite"));
        Ok(SomOutcome { state, pre_sort })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn init_is_equally_spaced() {
        let s = SomState::init(-10.0, 10.0).unwrap();
        let table = [-10.0, -6.67, -3.33, 0.0, 3.33, 6.67, 10.0];
        for (p, t) in s.prototypes().iter().zip(table) {
            assert_abs_diff_eq!(*p, t, epsilon = 0.005);
        }
        assert_eq!(SomState::init(0.0, 6.0).unwrap().prototypes(), [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let s = SomState::init(-1.0, 1.0).unwrap().prototypes();
        for k in 0..7 {
            assert_eq!(s[k], -s[6 - k]);
        }
        assert!(SomState::init(1.0, -1.0).is_err());
    }

    #[test]
    fn winner_rules() {
        let s = SomState::init(-10.0, 10.0).unwrap();
        for (k, &p) in s.prototypes().iter().enumerate() {
            assert_eq!(s.winner(p), k);
        }
        // brute force over the seven distances
        let brute = s
            .prototypes()
            .iter()
            .map(|p| (-9.0f64 - p).abs())
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap()
            .0;
        assert_eq!(brute, 0);
        assert_eq!(s.winner(-9.0), 0);
        let s = SomState::init(0.0, 6.0).unwrap();
        assert_eq!(s.winner(2.5), 2);
    }

    #[test]
    fn schedule_decays_linearly_to_final_values() {
        let s = SomSchedule::default();
        assert_eq!(s.rate(0), 0.5);
        assert_abs_diff_eq!(s.rate(49), 0.01, epsilon = 1e-15);
        assert_eq!(s.radius(0), 1);
        assert_eq!(s.radius(49), 0);
        let r: Vec<_> = (0..50).map(|e| s.radius(e)).collect();
        assert!(r.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn schedule_validation() {
        assert!(SomSchedule::default().validate().is_ok());
        assert!(SomSchedule { initial_rate: 0.0, final_rate: 0.0, ..Default::default() }.validate().is_ok());
        assert!(SomSchedule { initial_rate: 1.5, ..Default::default() }.validate().is_err());
        assert!(SomSchedule { final_rate: 0.9, ..Default::default() }.validate().is_err());
        assert!(SomSchedule { initial_radius: 7, ..Default::default() }.validate().is_err());
        assert!(SomSchedule { epochs: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn zero_rate_leaves_state_unchanged() {
        let s = SomState::init(-10.0, 10.0).unwrap();
        let sched = SomSchedule { initial_rate: 0.0, final_rate: 0.0, ..Default::default() };
        let out = s.train(&[1.0, -4.0, 7.5], &sched, 0).unwrap();
        assert_eq!(out.state, s);
        assert!(!out.crossed());
    }

    #[test]
    fn update_moves_toward_sample() {
        let mut s = SomState::init(-10.0, 10.0).unwrap();
        let before = s.prototypes();
        let w = s.update(1.0, 0.3, 1);
        assert_eq!(w, 3);
        for k in 0..7 {
            let moved = before[k] != s.prototypes()[k];
            assert_eq!(moved, (2..=4).contains(&k));
            assert!((s.prototypes()[k] - 1.0).abs() <= (before[k] - 1.0).abs());
        }
    }

    #[test]
    fn train_errors() {
        let s = SomState::init(-10.0, 10.0).unwrap();
        assert!(matches!(s.train(&[], &SomSchedule::default(), 0), Err(Error::EmptySamples)));
        assert!(matches!(s.train(&[11.0], &SomSchedule::default(), 0), Err(Error::OutOfDomain { .. })));
    }
}
