use super::engine::{self, Policy, Setup};
use super::{BackoffConfig, Corridor, SimConfig, SimOutcome};
use crate::error::{Error, Result};
use crate::model::RadioConfig;

/// Runs slotted random-backoff broadcast.
///
/// A backlogged vehicle holds a counter drawn uniformly from
/// `0..contention_window`; it transmits when the counter reads zero and
/// draws a fresh one afterwards. Counters of other vehicles tick down only in
/// slots where no conflicting vehicle on their channel transmitted (carrier
/// sense). Vehicle `r` in position order uses channel `r % k`.
pub fn run_contention(
    corridor: &Corridor,
    radio: &RadioConfig,
    config: &SimConfig,
    backoff: &BackoffConfig,
) -> Result<SimOutcome> {
    config.validate()?;
    corridor.check_radio(radio)?;
    if backoff.contention_window == 0 {
        return Err(Error::InvalidBackoffWindow(
            "contention window must hold at least one slot".into(),
        ));
    }
    engine::run(
        corridor,
        radio,
        config,
        Setup {
            policy: Policy::Contention {
                window: backoff.contention_window,
                counter: vec![0; corridor.graph().node_count()],
            },
            channels: radio.channel_count as usize,
            slot_len_s: radio.packet_airtime_s(),
            frame_slots: u64::from(backoff.contention_window),
        },
    )
}
