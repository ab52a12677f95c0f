//! Drone-delivery service composition over a skyway network.
//!
//! A drone leaves a source node with a set of packages and must visit every
//! destination, recharging at stations whose pads are shared with
//! background traffic. Each skyway segment is a flight service and each
//! station recharge a recharge service; the composers pick the sequence of
//! services that minimises the time until the last package is delivered.
//!
//! * [`composer::compose_heuristic`] restricts the search to the sector of
//!   the network that covers the destinations, widening it if needed.
//! * [`exhaustive::compose_exhaustive`] runs the same search on the whole
//!   network; [`exhaustive::brute_force_oracle`] enumerates walks for tiny
//!   instances.
//! * [`bench`] replays plans independently and runs seeded sweeps.

// `!(x > 0.0)` is used on purpose: unlike `x <= 0.0` it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod composer;
pub mod config;
pub mod drone;
pub mod error;
pub mod exhaustive;
pub mod net;
pub mod plan;
pub mod station;

pub use composer::{compose_heuristic, Algorithm, Diagnostics, Margins};
pub use config::Config;
pub use drone::{BatteryState, DroneSpec, Package};
pub use error::{ComposeError, DroneError, FormatError, NetworkError, RequestError, ScheduleError};
pub use exhaustive::{brute_force_oracle, compose_exhaustive};
pub use net::{Bounds, NodeId, Point, Sector, SkywayNetwork};
pub use plan::{CompositionPlan, DeliveryRequest, Leg};
pub use station::OccupancySchedule;
