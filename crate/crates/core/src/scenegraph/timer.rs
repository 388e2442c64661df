use crate::scalar::Scalar;

/// Number of ticks a period spans at `tick_rate`, rounding fractional ticks up.
///
/// A tiny slack absorbs representation error so that e.g. `0.2 * 90` stays 18.
pub fn ticks_for_period<T: Scalar>(period: T, tick_rate: u32) -> u64 {
    let exact = period.as_f64() * tick_rate as f64;
    let ticks = (exact - 1e-9).ceil();
    if ticks < 1.0 {
        1
    } else {
        ticks as u64
    }
}

/// Countdown timer driven by physics ticks.
#[derive(Debug, Clone, PartialEq)]
pub struct Timer<T> {
    pub period: T,
    pub one_shot: bool,
    pub autostart: bool,
    period_ticks: u64,
    remaining_ticks: u64,
    running: bool,
}

impl<T: Scalar> Timer<T> {
    pub fn new(period: T, one_shot: bool, autostart: bool) -> Self {
        Self {
            period,
            one_shot,
            autostart,
            period_ticks: 0,
            remaining_ticks: 0,
            running: false,
        }
    }

    pub fn start(&mut self, tick_rate: u32) {
        self.period_ticks = ticks_for_period(self.period, tick_rate);
        self.remaining_ticks = self.period_ticks;
        self.running = true;
    }

    pub fn stop(&mut self) {
        self.running = false;
        self.remaining_ticks = 0;
    }

    pub fn is_running(&self) -> bool {
        self.running
    }

    pub fn remaining_ticks(&self) -> u64 {
        self.remaining_ticks
    }

    pub fn remaining(&self, tick_rate: u32) -> T {
        T::of(self.remaining_ticks as f64 / tick_rate as f64)
    }

    /// Advances one tick; returns true when the timer elapses on this tick.
    pub(crate) fn advance(&mut self) -> bool {
        if !self.running {
            return false;
        }
        self.remaining_ticks = self.remaining_ticks.saturating_sub(1);
        if self.remaining_ticks > 0 {
            return false;
        }
        if self.one_shot {
            self.running = false;
        } else {
            self.remaining_ticks = self.period_ticks;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_rounding() {
        assert_eq!(ticks_for_period(0.5f64, 90), 45);
        assert_eq!(ticks_for_period(0.2f64, 90), 18);
        assert_eq!(ticks_for_period(0.201f64, 90), 19);
        assert_eq!(ticks_for_period(1e-6f64, 90), 1);
        assert_eq!(ticks_for_period(0.5f32, 90), 45);
    }

    #[test]
    fn one_shot_fires_once_and_stops() {
        let mut t = Timer::new(0.5f64, true, false);
        t.start(90);
        let fired: Vec<u64> = (1..=200).filter(|_| t.advance()).collect();
        assert_eq!(fired, vec![45]);
        assert!(!t.is_running());
    }

    #[test]
    fn repeating_timer_keeps_period() {
        let mut t = Timer::new(0.1f64, false, false);
        t.start(90);
        let fired: Vec<u64> = (1..=40).filter(|_| t.advance()).collect();
        assert_eq!(fired, vec![9, 18, 27, 36]);
        assert!(t.remaining_ticks() <= 9);
    }
}
