use proptest::prelude::*;

use curved::geometry::ScreenPoint;
use curved::protocol::{
    decode_frame, decode_input, encode_frame, Action, ErrorCode, Session, PROTOCOL_VERSION,
};
use curved::render::{snapshot, FrameSnapshot, Polyline, StyleClass};
use curved::world::{load_scene, SceneConfig};

fn frame(polylines: Vec<Polyline>) -> FrameSnapshot {
    FrameSnapshot {
        time: 1.0 / 3.0,
        k_norm: -0.25,
        boundary_radius: 300.0,
        pixels_per_unit: 1.0,
        polylines,
    }
}

#[test]
fn boundary_only_frame_has_one_polyline() {
    let w = load_scene(r#"{"grid": null}"#).unwrap();
    let line = encode_frame(&snapshot(&w, 1.0));
    assert_eq!(line.matches("\"class\"").count(), 1);
    assert!(line.contains("\"class\":\"boundary\""));
}

#[test]
fn empty_polyline_list() {
    let line = encode_frame(&frame(Vec::new()));
    assert!(line.ends_with("\"polylines\":[]}"), "{line}");
    assert_eq!(decode_frame(&line).unwrap().polylines, Vec::new());
}

#[test]
fn key_order_is_stable() {
    let line = encode_frame(&frame(vec![Polyline {
        id: Some(4),
        class: StyleClass::Object,
        closed: true,
        points: vec![ScreenPoint {
            x: 1.23456,
            y: -0.0001,
        }],
        center: None,
    }]));
    assert_eq!(
        line,
        r#"{"type":"frame","time":0.333,"k_norm":-0.25,"boundary_radius":300.0,"pixels_per_unit":1.0,"polylines":[{"id":4,"class":"object","closed":true,"points":[[1.235,0.0]]}]}"#
    );
}

#[test]
fn stream_survives_bad_lines() {
    let mut s = Session::new(
        SceneConfig::from_json(
            r#"{"bodies": [{"id": 2, "vertices": [[5, 0]], "controlled": true}]}"#,
        )
        .unwrap(),
    )
    .unwrap();
    let truncated = s.handle_line(r#"{"type":"input","act"#).unwrap();
    assert!(truncated.contains("\"code\":\"parse\""));
    let unknown = s.handle_line(r#"{"type":"teleport"}"#).unwrap();
    assert!(unknown.contains("\"code\":\"unknown_type\""));
    assert_eq!(
        s.handle_line(r#"{"type":"input","action":"thrust","value":3}"#),
        None
    );
    s.tick();
    assert_eq!(s.world().body(2).unwrap().acceleration, 3.0);
}

#[test]
fn version_is_checked() {
    let mut s = Session::new(SceneConfig::default()).unwrap();
    let ok = format!(r#"{{"type":"handshake","version":"{PROTOCOL_VERSION}"}}"#);
    assert_eq!(s.handle_line(&ok), None);
    let err = s
        .handle_line(r#"{"type":"handshake","version":"curved/9"}"#)
        .unwrap();
    assert!(err.contains("version_mismatch"));
}

#[test]
fn decode_examples() {
    let i = decode_input(r#"{"type":"input","action":"curvature_set","value":-4}"#).unwrap();
    assert_eq!((i.action, i.value), (Action::CurvatureSet, -4.0));
    let e = decode_input(r#"{"type":"input","action":"fly","value":1}"#).unwrap_err();
    assert_eq!(e.code, ErrorCode::UnknownAction);
}

#[test]
fn curvature_set_is_clamped_when_applied() {
    let mut s = Session::new(SceneConfig::default()).unwrap();
    s.handle_line(r#"{"type":"input","action":"curvature_set","value":-4}"#);
    assert_eq!(s.world().curvature.k_norm(), -1.0);
}

fn polyline() -> impl Strategy<Value = Polyline> {
    (
        proptest::option::of(0u32..1000),
        prop_oneof![
            Just(StyleClass::Grid),
            Just(StyleClass::Boundary),
            Just(StyleClass::Object),
            Just(StyleClass::Controlled),
        ],
        any::<bool>(),
        proptest::collection::vec((-1e4..1e4f64, -1e4..1e4f64), 0..20),
    )
        .prop_map(|(id, class, closed, pts)| Polyline {
            id,
            class,
            closed,
            points: pts.into_iter().map(|(x, y)| ScreenPoint { x, y }).collect(),
            center: None,
        })
}

proptest! {
    #[test]
    fn frames_round_trip_at_three_decimals(lines in proptest::collection::vec(polyline(), 0..8)) {
        let f = frame(lines);
        let line = encode_frame(&f);
        prop_assert!(!line.contains('\n'));
        let back = decode_frame(&line).unwrap();
        prop_assert_eq!(back.polylines.len(), f.polylines.len());
        for (a, b) in f.polylines.iter().zip(&back.polylines) {
            prop_assert_eq!((a.id, a.class, a.closed), (b.id, b.class, b.closed));
            for (p, q) in a.points.iter().zip(&b.points) {
                prop_assert!((p.x - q.x).abs() <= 5e-4 + 1e-9);
                prop_assert!((p.y - q.y).abs() <= 5e-4 + 1e-9);
            }
        }
        prop_assert_eq!(encode_frame(&back), line);
    }
}
