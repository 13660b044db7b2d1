//! NDJSON session protocol: the engine streams frames out and takes input
//! events in, one JSON object per line.
//!
//! ```text
//! → {"type":"handshake","version":"curved/1","boundary_radius":300.0,...}
//! ← {"type":"input","action":"thrust","value":1.0}
//! → {"type":"frame","time":0.017,"k_norm":0.0,...,"polylines":[...]}
//! ```

use std::fmt;
use std::io::{self, BufRead, BufReader, Write};
use std::net::TcpListener;
use std::str::FromStr;
use std::sync::mpsc::{self, RecvTimeoutError};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dynamics::{BodyInput, DEFAULT_DT};
use crate::error::Result;
use crate::geometry::{PolarPoint, ScreenPoint};
use crate::render::{snapshot, FrameSnapshot, Polyline, StyleClass};
use crate::world::{SceneConfig, WorldState};

pub const PROTOCOL_VERSION: &str = "curved/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SessionMessage {
    Handshake(Handshake),
    Frame(FrameMessage),
    Input(InputMessage),
    Error(ErrorMessage),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Handshake {
    pub version: String,
    pub boundary_radius: f64,
    pub pixels_per_unit: f64,
    pub k_norm: f64,
    pub controlled: Option<u32>,
}

impl Default for Handshake {
    fn default() -> Self {
        Handshake {
            version: PROTOCOL_VERSION.to_string(),
            boundary_radius: 0.0,
            pixels_per_unit: 1.0,
            k_norm: 0.0,
            controlled: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameMessage {
    pub time: f64,
    pub k_norm: f64,
    pub boundary_radius: f64,
    pub pixels_per_unit: f64,
    pub polylines: Vec<WirePolyline>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WirePolyline {
    pub id: Option<u32>,
    pub class: StyleClass,
    pub closed: bool,
    pub points: Vec<[f64; 2]>,
    /// Body centre as `[r, theta]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputMessage {
    pub action: String,
    #[serde(default)]
    pub value: f64,
    /// Tick at which a replayed input takes effect.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tick: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorMessage {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    Parse,
    UnknownType,
    UnknownAction,
    InvalidValue,
    VersionMismatch,
}

impl ErrorMessage {
    fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ErrorMessage {
            code,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Thrust,
    Rotate,
    CurvatureDelta,
    CurvatureSet,
    Pause,
    Reset,
}

impl FromStr for Action {
    type Err = ErrorMessage;

    fn from_str(s: &str) -> Result<Self, ErrorMessage> {
        Ok(match s {
            "thrust" => Action::Thrust,
            "rotate" => Action::Rotate,
            "curvature_delta" => Action::CurvatureDelta,
            "curvature_set" => Action::CurvatureSet,
            "pause" => Action::Pause,
            "reset" => Action::Reset,
            other => {
                return Err(ErrorMessage::new(
                    ErrorCode::UnknownAction,
                    format!("unknown action `{other}`"),
                ))
            }
        })
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Thrust => "thrust",
            Action::Rotate => "rotate",
            Action::CurvatureDelta => "curvature_delta",
            Action::CurvatureSet => "curvature_set",
            Action::Pause => "pause",
            Action::Reset => "reset",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Input {
    pub action: Action,
    pub value: f64,
    pub tick: Option<u64>,
}

/// A decoded client line.
#[derive(Debug, Clone, PartialEq)]
pub enum Inbound {
    Handshake(Handshake),
    Input(Input),
    /// A known message type that clients have no reason to send.
    Ignored,
}

fn round3(x: f64) -> f64 {
    // adding 0.0 turns -0.0 into 0.0
    (x * 1000.0).round() / 1000.0 + 0.0
}

fn point(p: &ScreenPoint) -> [f64; 2] {
    [round3(p.x), round3(p.y)]
}

impl FrameMessage {
    pub fn from_snapshot(frame: &FrameSnapshot) -> Self {
        FrameMessage {
            time: round3(frame.time),
            k_norm: round3(frame.k_norm),
            boundary_radius: round3(frame.boundary_radius),
            pixels_per_unit: round3(frame.pixels_per_unit),
            polylines: frame
                .polylines
                .iter()
                .map(|l| WirePolyline {
                    id: l.id,
                    class: l.class,
                    closed: l.closed,
                    points: l.points.iter().map(point).collect(),
                    center: l.center.map(|c| [round3(c.r), round3(c.theta)]),
                })
                .collect(),
        }
    }

    pub fn into_snapshot(self) -> FrameSnapshot {
        FrameSnapshot {
            time: self.time,
            k_norm: self.k_norm,
            boundary_radius: self.boundary_radius,
            pixels_per_unit: self.pixels_per_unit,
            polylines: self
                .polylines
                .into_iter()
                .map(|l| Polyline {
                    id: l.id,
                    class: l.class,
                    closed: l.closed,
                    points: l
                        .points
                        .iter()
                        .map(|&[x, y]| ScreenPoint { x, y })
                        .collect(),
                    center: l.center.map(|[r, theta]| PolarPoint { r, theta }),
                })
                .collect(),
        }
    }
}

/// Serializes any message as one line, without the trailing newline.
pub fn encode(message: &SessionMessage) -> String {
    serde_json::to_string(message).expect("protocol messages always serialize")
}

/// One frame line, every number rounded to three decimals.
pub fn encode_frame(frame: &FrameSnapshot) -> String {
    encode(&SessionMessage::Frame(FrameMessage::from_snapshot(frame)))
}

/// Parses a frame line back into a snapshot.
pub fn decode_frame(line: &str) -> Result<FrameSnapshot, ErrorMessage> {
    match serde_json::from_str::<SessionMessage>(line) {
        Ok(SessionMessage::Frame(f)) => Ok(f.into_snapshot()),
        Ok(_) => Err(ErrorMessage::new(
            ErrorCode::UnknownType,
            "expected a frame",
        )),
        Err(e) => Err(ErrorMessage::new(ErrorCode::Parse, e.to_string())),
    }
}

/// Decodes a line sent by a client.
pub fn decode_inbound(line: &str) -> Result<Inbound, ErrorMessage> {
    let value: Value = serde_json::from_str(line)
        .map_err(|e| ErrorMessage::new(ErrorCode::Parse, e.to_string()))?;
    let kind = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| ErrorMessage::new(ErrorCode::Parse, "missing string field `type`"))?;
    match kind {
        "handshake" => {
            let h: Handshake = serde_json::from_value(value)
                .map_err(|e| ErrorMessage::new(ErrorCode::Parse, e.to_string()))?;
            if h.version != PROTOCOL_VERSION {
                return Err(ErrorMessage::new(
                    ErrorCode::VersionMismatch,
                    format!("expected `{PROTOCOL_VERSION}`, got `{}`", h.version),
                ));
            }
            Ok(Inbound::Handshake(h))
        }
        "input" => {
            let m: InputMessage = serde_json::from_value(value)
                .map_err(|e| ErrorMessage::new(ErrorCode::Parse, e.to_string()))?;
            let action = m.action.parse()?;
            if !m.value.is_finite() {
                return Err(ErrorMessage::new(
                    ErrorCode::InvalidValue,
                    "value must be finite",
                ));
            }
            Ok(Inbound::Input(Input {
                action,
                value: m.value,
                tick: m.tick,
            }))
        }
        "frame" | "error" => Ok(Inbound::Ignored),
        other => Err(ErrorMessage::new(
            ErrorCode::UnknownType,
            format!("unknown message type `{other}`"),
        )),
    }
}

/// Decodes an input line. Any other message type is an error.
pub fn decode_input(line: &str) -> Result<Input, ErrorMessage> {
    match decode_inbound(line)? {
        Inbound::Input(input) => Ok(input),
        _ => Err(ErrorMessage::new(
            ErrorCode::UnknownType,
            "expected an input message",
        )),
    }
}

/// A world driven by protocol messages.
#[derive(Debug, Clone)]
pub struct Session {
    scene: SceneConfig,
    world: WorldState,
    paused: bool,
    dt: f64,
}

impl Session {
    pub fn new(scene: SceneConfig) -> Result<Self> {
        let world = WorldState::from_config(&scene)?;
        Ok(Session {
            scene,
            world,
            paused: false,
            dt: DEFAULT_DT,
        })
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn is_paused(&self) -> bool {
        self.paused
    }

    pub fn handshake(&self) -> String {
        encode(&SessionMessage::Handshake(Handshake {
            version: PROTOCOL_VERSION.to_string(),
            boundary_radius: self.world.boundary_radius,
            pixels_per_unit: self.world.pixels_per_unit,
            k_norm: self.world.curvature.k_norm(),
            controlled: self.world.controlled_body,
        }))
    }

    pub fn apply(&mut self, input: Input) {
        match input.action {
            Action::Thrust => self.world.queue_input(BodyInput::Thrust, input.value),
            Action::Rotate => self.world.queue_input(BodyInput::Rotate, input.value),
            Action::CurvatureDelta => self.world.adjust_curvature(input.value),
            Action::CurvatureSet => self.world.set_curvature(input.value),
            Action::Pause => self.paused = !self.paused,
            Action::Reset => {
                self.world =
                    WorldState::from_config(&self.scene).expect("scene was validated at start");
            }
        }
    }

    /// Handles one client line. Returns the error line to send back, if any.
    pub fn handle_line(&mut self, line: &str) -> Option<String> {
        if line.trim().is_empty() {
            return None;
        }
        match decode_inbound(line) {
            Ok(Inbound::Input(input)) => {
                self.apply(input);
                None
            }
            Ok(_) => None,
            Err(e) => Some(encode(&SessionMessage::Error(e))),
        }
    }

    /// Steps the world unless paused and returns the frame line.
    pub fn tick(&mut self) -> String {
        if !self.paused {
            self.world.step(self.dt);
        }
        encode_frame(&snapshot(&self.world, self.world.pixels_per_unit))
    }
}

fn send<W: Write>(out: &mut W, line: &str) -> io::Result<()> {
    out.write_all(line.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()
}

/// Real-time loop: one tick every `dt` seconds of wall time. Lines are read on
/// a separate thread and drained in arrival order at the start of each tick.
/// Returns when the input reaches end-of-stream.
pub fn session_loop<R, W>(session: &mut Session, input: R, mut out: W) -> io::Result<()>
where
    R: BufRead + Send + 'static,
    W: Write,
{
    send(&mut out, &session.handshake())?;
    let (tx, rx) = mpsc::channel::<io::Result<String>>();
    std::thread::spawn(move || {
        for line in input.lines() {
            let failed = line.is_err();
            if tx.send(line).is_err() || failed {
                break;
            }
        }
    });
    let period = Duration::from_secs_f64(session.dt);
    let mut next = Instant::now() + period;
    loop {
        loop {
            let wait = next.saturating_duration_since(Instant::now());
            match rx.recv_timeout(wait) {
                Ok(line) => {
                    if let Some(err) = session.handle_line(&line?) {
                        send(&mut out, &err)?;
                    }
                }
                Err(RecvTimeoutError::Timeout) => break,
                Err(RecvTimeoutError::Disconnected) => return Ok(()),
            }
        }
        send(&mut out, &session.tick())?;
        next += period;
    }
}

/// Deterministic loop for recorded transcripts. Inputs carrying a `tick`
/// take effect at that tick; others at the tick current when read. Runs
/// `max(ticks, last input tick + 1)` ticks with no wall-clock pacing.
pub fn replay<R: BufRead, W: Write>(
    session: &mut Session,
    input: R,
    mut out: W,
    ticks: u64,
) -> io::Result<()> {
    send(&mut out, &session.handshake())?;
    let mut current = 0u64;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match decode_inbound(&line) {
            Ok(Inbound::Input(input)) => {
                let at = input.tick.unwrap_or(current);
                while current < at {
                    send(&mut out, &session.tick())?;
                    current += 1;
                }
                session.apply(input);
            }
            Ok(_) => {}
            Err(e) => send(&mut out, &encode(&SessionMessage::Error(e)))?,
        }
    }
    let end = ticks.max(current + 1);
    while current < end {
        send(&mut out, &session.tick())?;
        current += 1;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transport {
    Stdio,
    /// Listens on `127.0.0.1:port` for a single client.
    Tcp(u16),
}

impl FromStr for Transport {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "stdio" {
            return Ok(Transport::Stdio);
        }
        s.strip_prefix("tcp:")
            .and_then(|p| p.parse().ok())
            .map(Transport::Tcp)
            .ok_or_else(|| format!("expected `stdio` or `tcp:PORT`, got `{s}`"))
    }
}

/// Serves one session over `transport` until the client closes its side.
pub fn serve(
    session: &mut Session,
    transport: Transport,
    replay_ticks: Option<u64>,
) -> io::Result<()> {
    match transport {
        Transport::Stdio => {
            let out = io::stdout().lock();
            match replay_ticks {
                Some(t) => replay(session, io::stdin().lock(), out, t),
                None => session_loop(session, BufReader::new(io::stdin()), out),
            }
        }
        Transport::Tcp(port) => {
            let listener = TcpListener::bind(("127.0.0.1", port))?;
            let (stream, _) = listener.accept()?;
            let reader = BufReader::new(stream.try_clone()?);
            match replay_ticks {
                Some(t) => replay(session, reader, stream, t),
                None => session_loop(session, reader, stream),
            }
        }
    }
}
