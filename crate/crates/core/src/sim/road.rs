use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::RoadScenario;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vehicle {
    pub id: usize,
    pub lane: u32,
    /// Longitudinal position from the start of the road, meters.
    pub position_m: f64,
}

/// Places `N·⌊length/D + 1⌋` vehicles: one every `D` meters in every lane,
/// lanes aligned. Ids follow position, then lane.
pub fn build_road(road: &RoadScenario) -> Result<Vec<Vehicle>> {
    if road.road_length_m <= 0.0 {
        return Err(invalid("road_length_m", "road has zero length"));
    }
    road.validate()?;
    let ratio = road.road_length_m / road.inter_vehicle_gap_m;
    // Absorb representation error when the gap divides the length.
    let per_lane = (ratio + 1e-9 * ratio.max(1.0)).floor() as usize + 1;
    let mut vehicles = Vec::with_capacity(per_lane * road.lane_count as usize);
    for k in 0..per_lane {
        let position_m = k as f64 * road.inter_vehicle_gap_m;
        for lane in 0..road.lane_count {
            vehicles.push(Vehicle {
                id: vehicles.len(),
                lane,
                position_m,
            });
        }
    }
    Ok(vehicles)
}
