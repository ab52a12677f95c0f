//! Drone capabilities: payload-dependent range, battery accounting and flight time.

use serde::{Deserialize, Serialize};

use crate::error::DroneError;
use crate::net::NodeId;

/// Slack on range checks so a leg that exactly drains the battery is allowed.
pub const RANGE_SLACK_KM: f64 = 1e-9;

/// Physical and operational parameters of a delivery drone.
///
/// Defaults are the DJI Matrice 300 figures: 15.3 kg payload, 82.8 km/h,
/// 33 km range empty and 3 km at full load, 2.15 h recharge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DroneSpec {
    pub max_payload_kg: f64,
    pub max_speed_kmh: f64,
    /// Full-battery range with no payload.
    pub range_empty_km: f64,
    /// Full-battery range at `max_payload_kg`.
    pub range_full_km: f64,
    pub recharge_hours: f64,
    pub drop_handling_hours: f64,
    /// Cruise speed as a fraction of `max_speed_kmh`.
    pub cruise_fraction: f64,
}

impl Default for DroneSpec {
    fn default() -> Self {
        DroneSpec {
            max_payload_kg: 15.3,
            max_speed_kmh: 82.8,
            range_empty_km: 33.0,
            range_full_km: 3.0,
            recharge_hours: 2.15,
            drop_handling_hours: 0.0,
            cruise_fraction: 1.0,
        }
    }
}

impl DroneSpec {
    pub fn validate(&self) -> Result<(), DroneError> {
        let finite = [
            self.max_payload_kg,
            self.max_speed_kmh,
            self.range_empty_km,
            self.range_full_km,
            self.recharge_hours,
            self.drop_handling_hours,
            self.cruise_fraction,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(DroneError::InvalidSpec("all parameters must be finite"));
        }
        if self.max_payload_kg <= 0.0 {
            return Err(DroneError::InvalidSpec("max payload must be positive"));
        }
        if self.max_speed_kmh <= 0.0 || self.cruise_fraction <= 0.0 {
            return Err(DroneError::InvalidSpec("cruise speed must be positive"));
        }
        if !(0.0 < self.range_full_km && self.range_full_km <= self.range_empty_km) {
            return Err(DroneError::InvalidSpec("need 0 < loaded range <= empty range"));
        }
        if self.recharge_hours <= 0.0 {
            return Err(DroneError::InvalidSpec("recharge duration must be positive"));
        }
        if self.drop_handling_hours < 0.0 {
            return Err(DroneError::InvalidSpec("drop handling time must be non-negative"));
        }
        Ok(())
    }

    pub fn cruise_speed_kmh(&self) -> f64 {
        self.max_speed_kmh * self.cruise_fraction
    }

    /// Full-battery range, interpolated linearly between the empty and
    /// fully-loaded endpoints.
    pub fn flight_range(&self, payload_kg: f64) -> Result<f64, DroneError> {
        if payload_kg < 0.0 {
            return Err(DroneError::NegativePayload(payload_kg));
        }
        if payload_kg > self.max_payload_kg {
            return Err(DroneError::Overload {
                payload: payload_kg,
                max: self.max_payload_kg,
            });
        }
        let load = payload_kg / self.max_payload_kg;
        Ok(self.range_empty_km - (self.range_empty_km - self.range_full_km) * load)
    }

    pub fn travel_time(&self, length_km: f64) -> Result<f64, DroneError> {
        if length_km < 0.0 {
            return Err(DroneError::NegativeLength(length_km));
        }
        Ok(length_km / self.cruise_speed_kmh())
    }

    /// Battery left after flying `length_km` with `payload_kg` on board.
    pub fn consume(
        &self,
        battery: BatteryState,
        payload_kg: f64,
        length_km: f64,
    ) -> Result<BatteryState, DroneError> {
        if length_km < 0.0 {
            return Err(DroneError::NegativeLength(length_km));
        }
        let range = self.flight_range(payload_kg)?;
        let available = battery.fraction() * range;
        if length_km > available + RANGE_SLACK_KM {
            return Err(DroneError::InsufficientBattery {
                length: length_km,
                available,
            });
        }
        Ok(BatteryState::clamped(battery.fraction() - length_km / range))
    }

    pub fn can_fly(&self, battery: BatteryState, payload_kg: f64, length_km: f64) -> bool {
        self.consume(battery, payload_kg, length_km).is_ok()
    }
}

/// State of charge as a fraction of capacity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BatteryState(f64);

impl BatteryState {
    pub const FULL: BatteryState = BatteryState(1.0);
    pub const EMPTY: BatteryState = BatteryState(0.0);

    pub fn new(fraction: f64) -> Option<Self> {
        (0.0..=1.0).contains(&fraction).then_some(BatteryState(fraction))
    }

    fn clamped(fraction: f64) -> Self {
        BatteryState(fraction.clamp(0.0, 1.0))
    }

    pub fn fraction(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Package {
    pub weight_kg: f64,
    pub destination: NodeId,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn spec() -> DroneSpec {
        DroneSpec::default()
    }

    #[test]
    fn range_envelope() {
        assert_eq!(spec().flight_range(0.0).unwrap(), 33.0);
        assert_eq!(spec().flight_range(15.3).unwrap(), 3.0);
        assert_eq!(spec().flight_range(7.65).unwrap(), 18.0);
        assert!(matches!(spec().flight_range(15.31), Err(DroneError::Overload { .. })));
    }

    #[test]
    fn travel_times() {
        assert_eq!(spec().travel_time(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(spec().travel_time(46.0).unwrap(), 0.5556, epsilon = 1e-4);
        assert_eq!(spec().travel_time(82.8).unwrap(), 1.0);
        assert!(spec().travel_time(-1.0).is_err());
    }

    #[test]
    fn consumption() {
        let s = spec();
        let half = s.consume(BatteryState::FULL, 0.0, 16.5).unwrap();
        assert_eq!(half.fraction(), 0.5);
        let empty = s.consume(half, 15.3, 1.5).unwrap();
        assert_eq!(empty.fraction(), 0.0);
        assert_eq!(s.consume(half, 3.0, 0.0).unwrap(), half);
        match s.consume(half, 15.3, 1.6) {
            Err(DroneError::InsufficientBattery { length, available }) => {
                assert_eq!(length, 1.6);
                assert_eq!(available, 1.5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn feasibility_guard() {
        let s = spec();
        assert!(s.can_fly(BatteryState::FULL, 0.0, 33.0));
        assert!(!s.can_fly(BatteryState::FULL, 0.0, 33.001));
        assert!(!s.can_fly(BatteryState::EMPTY, 2.0, 1e-6));
        assert!(s.can_fly(BatteryState::EMPTY, 2.0, 0.0));
    }

    #[test]
    fn spec_validation() {
        assert!(spec().validate().is_ok());
        let bad = DroneSpec {
            range_full_km: 40.0,
            ..spec()
        };
        assert!(bad.validate().is_err());
        let bad = DroneSpec {
            recharge_hours: 0.0,
            ..spec()
        };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn consume_is_additive(a in 0.0f64..10.0, b in 0.0f64..10.0, payload in 0.0f64..5.0) {
            let s = spec();
            let split = s.consume(s.consume(BatteryState::FULL, payload, a).unwrap(), payload, b).unwrap();
            let whole = s.consume(BatteryState::FULL, payload, a + b).unwrap();
            prop_assert!((split.fraction() - whole.fraction()).abs() <= 1e-9);
        }

        #[test]
        fn travel_time_is_linear(a in 0.0f64..500.0, b in 0.0f64..500.0) {
            let s = spec();
            let sum = s.travel_time(a).unwrap() + s.travel_time(b).unwrap();
            prop_assert!((s.travel_time(a + b).unwrap() - sum).abs() <= 1e-12);
        }

        #[test]
        fn battery_stays_in_unit_interval(legs in proptest::collection::vec((0.0f64..15.0, 0.0f64..15.3), 0..20)) {
            let s = spec();
            let mut battery = BatteryState::FULL;
            for (len, payload) in legs {
                if s.can_fly(battery, payload, len) {
                    battery = s.consume(battery, payload, len).unwrap();
                } else {
                    battery = BatteryState::FULL;
                }
                prop_assert!((0.0..=1.0).contains(&battery.fraction()));
            }
        }
    }
}
