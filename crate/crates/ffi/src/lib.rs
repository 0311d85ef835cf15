//! C ABI over `pursuit-core`.
//!
//! Every fallible call returns a [`PursuitStatus`]; on failure a message is
//! available from [`pursuit_last_error`] on the same thread. Games are
//! opaque handles created by [`pursuit_game_new`] and released with
//! [`pursuit_game_free`]. Strings returned through out-parameters are owned
//! by the caller and must be released with [`pursuit_string_free`].
//!
//! Vector outputs are written as interleaved `x, y` doubles: a buffer of
//! `2 * n` for per-pursuer quantities and of 2 for the evader.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pursuit_core::error::{GeometryError, ScenarioError, SimError};
use pursuit_core::geometry::{AgentConfig, Vec2};
use pursuit_core::safeset::safe_area;
use pursuit_core::scenario::parse_scenario;
use pursuit_core::simulator::{self, GameState};
use pursuit_core::trajectory;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PursuitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SpeedOrderViolation = 3,
    CaptureDegenerate = 4,
    GeometryFailure = 5,
    ParseError = 6,
    ValidationError = 7,
    Panic = 8,
}

/// One agent: position and speed.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PursuitAgent {
    pub x: f64,
    pub y: f64,
    pub speed: f64,
}

impl From<PursuitAgent> for AgentConfig {
    fn from(a: PursuitAgent) -> Self {
        AgentConfig::new(Vec2::new(a.x, a.y), a.speed)
    }
}

/// Opaque game state.
pub struct PursuitGame {
    state: GameState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn geometry_status(e: &GeometryError) -> PursuitStatus {
    match e {
        GeometryError::SpeedOrderViolation { .. } => PursuitStatus::SpeedOrderViolation,
        GeometryError::CaptureDegenerate { .. } => PursuitStatus::CaptureDegenerate,
        GeometryError::NonPositiveSpeed { .. } | GeometryError::NonFinite(_) | GeometryError::NoPursuers => {
            PursuitStatus::InvalidArgument
        }
        GeometryError::EmptyOverlap { .. } | GeometryError::AssertionFailure(_) => PursuitStatus::GeometryFailure,
    }
}

fn fail(status: PursuitStatus, msg: impl Into<String>) -> PursuitStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into [`PursuitStatus::Panic`].
fn guard(f: impl FnOnce() -> PursuitStatus) -> PursuitStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PursuitStatus::Panic, "internal panic"),
    }
}

unsafe fn agents<'a>(p: *const PursuitAgent, n: usize) -> Option<&'a [PursuitAgent]> {
    if n == 0 {
        Some(&[])
    } else if p.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(p, n))
    }
}

unsafe fn write_vecs(out: *mut f64, vs: impl ExactSizeIterator<Item = Vec2>) {
    let buf = std::slice::from_raw_parts_mut(out, 2 * vs.len());
    for (k, v) in vs.enumerate() {
        buf[2 * k] = v.x;
        buf[2 * k + 1] = v.y;
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pursuit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn pursuit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a game at time 0. `pursuers` points to `n` agents.
///
/// # Safety
/// `pursuers` must be valid for `n` reads and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_new(
    evader: PursuitAgent,
    pursuers: *const PursuitAgent,
    n: usize,
    out: *mut *mut PursuitGame,
) -> PursuitStatus {
    guard(|| {
        if out.is_null() {
            return fail(PursuitStatus::NullPointer, "out is NULL");
        }
        let Some(ps) = agents(pursuers, n) else {
            return fail(PursuitStatus::NullPointer, "pursuers is NULL");
        };
        let ps: Vec<AgentConfig> = ps.iter().map(|&a| a.into()).collect();
        match GameState::new(0.0, evader.into(), ps) {
            Ok(state) => {
                *out = Box::into_raw(Box::new(PursuitGame { state }));
                PursuitStatus::Ok
            }
            Err(e) => fail(geometry_status(&e), e.to_string()),
        }
    })
}

/// Releases a game. NULL is ignored.
///
/// # Safety
/// `game` must come from [`pursuit_game_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_free(game: *mut PursuitGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Advances every agent by one explicit Euler step of `dt` along the
/// equilibrium headings. On failure the game is left unchanged.
///
/// # Safety
/// `game` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_step(game: *mut PursuitGame, dt: f64) -> PursuitStatus {
    guard(|| {
        let Some(g) = game.as_mut() else {
            return fail(PursuitStatus::NullPointer, "game is NULL");
        };
        if !(dt > 0.0 && dt.is_finite()) {
            return fail(PursuitStatus::InvalidArgument, format!("dt must be positive, got {dt}"));
        }
        match simulator::step_with_retry(&g.state, dt) {
            Ok(s) => {
                g.state = s;
                PursuitStatus::Ok
            }
            Err(SimError::Geometry { source, .. }) => fail(geometry_status(&source), source.to_string()),
            Err(e) => fail(PursuitStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Number of pursuers, or 0 for a NULL handle.
///
/// # Safety
/// `game` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_num_pursuers(game: *const PursuitGame) -> usize {
    game.as_ref().map_or(0, |g| g.state.pursuers.len())
}

/// Current simulation time.
///
/// # Safety
/// `game` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_time(game: *const PursuitGame, out: *mut f64) -> PursuitStatus {
    guard(|| match (game.as_ref(), out.is_null()) {
        (Some(g), false) => {
            *out = g.state.time;
            PursuitStatus::Ok
        }
        _ => fail(PursuitStatus::NullPointer, "game or out is NULL"),
    })
}

/// Area of the safe-reachable set.
///
/// # Safety
/// `game` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_area(game: *const PursuitGame, out: *mut f64) -> PursuitStatus {
    guard(|| match (game.as_ref(), out.is_null()) {
        (Some(g), false) => {
            *out = g.state.area;
            PursuitStatus::Ok
        }
        _ => fail(PursuitStatus::NullPointer, "game or out is NULL"),
    })
}

/// Area gradients with respect to every pursuer position (`2n` doubles)
/// and the evader position (2 doubles).
///
/// # Safety
/// `game` must be a live handle; `pursuers_out` valid for `2n` writes and
/// `evader_out` for 2.
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_gradients(
    game: *const PursuitGame,
    pursuers_out: *mut f64,
    evader_out: *mut f64,
) -> PursuitStatus {
    guard(|| {
        let Some(g) = game.as_ref() else {
            return fail(PursuitStatus::NullPointer, "game is NULL");
        };
        if pursuers_out.is_null() || evader_out.is_null() {
            return fail(PursuitStatus::NullPointer, "output buffer is NULL");
        }
        write_vecs(pursuers_out, g.state.gradients.per_pursuer.iter().copied());
        write_vecs(evader_out, std::iter::once(g.state.gradients.evader));
        PursuitStatus::Ok
    })
}

/// Equilibrium headings: unit vectors, or zero for an agent holding still.
///
/// # Safety
/// As for [`pursuit_game_gradients`].
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_headings(
    game: *const PursuitGame,
    pursuers_out: *mut f64,
    evader_out: *mut f64,
) -> PursuitStatus {
    guard(|| {
        let Some(g) = game.as_ref() else {
            return fail(PursuitStatus::NullPointer, "game is NULL");
        };
        if pursuers_out.is_null() || evader_out.is_null() {
            return fail(PursuitStatus::NullPointer, "output buffer is NULL");
        }
        let h = g.state.headings();
        write_vecs(pursuers_out, h.pursuers.iter().map(|u| u.direction()));
        write_vecs(evader_out, std::iter::once(h.evader.direction()));
        PursuitStatus::Ok
    })
}

/// Current positions.
///
/// # Safety
/// As for [`pursuit_game_gradients`].
#[no_mangle]
pub unsafe extern "C" fn pursuit_game_positions(
    game: *const PursuitGame,
    pursuers_out: *mut f64,
    evader_out: *mut f64,
) -> PursuitStatus {
    guard(|| {
        let Some(g) = game.as_ref() else {
            return fail(PursuitStatus::NullPointer, "game is NULL");
        };
        if pursuers_out.is_null() || evader_out.is_null() {
            return fail(PursuitStatus::NullPointer, "output buffer is NULL");
        }
        write_vecs(pursuers_out, g.state.pursuers.iter().map(|p| p.position));
        write_vecs(evader_out, std::iter::once(g.state.evader.position));
        PursuitStatus::Ok
    })
}

/// Safe-set area for a configuration, without creating a game.
///
/// # Safety
/// `pursuers` valid for `n` reads; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pursuit_safe_area(
    evader: PursuitAgent,
    pursuers: *const PursuitAgent,
    n: usize,
    out: *mut f64,
) -> PursuitStatus {
    guard(|| {
        if out.is_null() {
            return fail(PursuitStatus::NullPointer, "out is NULL");
        }
        let Some(ps) = agents(pursuers, n) else {
            return fail(PursuitStatus::NullPointer, "pursuers is NULL");
        };
        let ps: Vec<AgentConfig> = ps.iter().map(|&a| a.into()).collect();
        match safe_area(&evader.into(), &ps) {
            Ok(a) => {
                *out = a;
                PursuitStatus::Ok
            }
            Err(e) => fail(geometry_status(&e), e.to_string()),
        }
    })
}

/// Runs a scenario given as JSON text and returns the trajectory file
/// contents (JSON Lines) in `*out`.
///
/// # Safety
/// `scenario_json` must be a NUL-terminated string; `out` valid for one
/// write. Release the result with [`pursuit_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pursuit_run_scenario_json(scenario_json: *const c_char, out: *mut *mut c_char) -> PursuitStatus {
    guard(|| {
        if scenario_json.is_null() || out.is_null() {
            return fail(PursuitStatus::NullPointer, "argument is NULL");
        }
        let Ok(text) = CStr::from_ptr(scenario_json).to_str() else {
            return fail(PursuitStatus::ParseError, "scenario is not valid UTF-8");
        };
        let cfg = match parse_scenario(text) {
            Ok(c) => c,
            Err(e @ ScenarioError::Validation(_)) => return fail(PursuitStatus::ValidationError, e.to_string()),
            Err(e) => return fail(PursuitStatus::ParseError, e.to_string()),
        };
        match simulator::run(&cfg) {
            Ok(res) => {
                let s = trajectory::to_jsonl(&cfg, &res);
                *out = CString::new(s).expect("JSON has no NUL").into_raw();
                PursuitStatus::Ok
            }
            Err(SimError::Geometry { source, .. }) => fail(geometry_status(&source), source.to_string()),
            Err(e) => fail(PursuitStatus::ValidationError, e.to_string()),
        }
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pursuit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
