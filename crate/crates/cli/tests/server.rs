use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use base64::Engine;
use serde_json::{json, Value};
use tower::ServiceExt;

use vesseltrack::phantom::{render_tubes, tube_phantom, TubeSegment};
use vesseltrack::raster::{to_png_bytes, GrayImage};
use vesseltrack_cli::server::router;

async fn call(
    app: &Router,
    method: Method,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Vec<u8>, Option<String>) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let content_type = response
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_owned());
    let bytes = to_bytes(response.into_body(), usize::MAX)
        .await
        .unwrap()
        .to_vec();
    (status, bytes, content_type)
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

fn encoded(image: &GrayImage) -> String {
    base64::engine::general_purpose::STANDARD.encode(to_png_bytes(image))
}

async fn create(app: &Router, image: &GrayImage, config: Option<Value>) -> String {
    let mut body = json!({ "image": encoded(image) });
    if let Some(c) = config {
        body["config"] = c;
    }
    let (status, bytes, _) = call(app, Method::POST, "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED);
    json_of(&bytes)["session_id"].as_str().unwrap().to_owned()
}

#[tokio::test]
async fn full_session_lifecycle() {
    let app = router();
    let id = create(&app, &tube_phantom(), None).await;

    let (status, bytes, _) = call(
        &app,
        Method::GET,
        &format!("/sessions/{id}/stage/median.png"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(json_of(&bytes)["error"], "NotRun");

    let (status, bytes, _) = call(&app, Method::POST, &format!("/sessions/{id}/run"), None).await;
    assert_eq!(status, StatusCode::OK);
    let summary = json_of(&bytes);
    assert_eq!(
        summary["stages"],
        json!(["median", "frangi", "otsu", "close", "skeleton", "edges", "graph"])
    );
    assert_eq!(summary["timings"].as_array().unwrap().len(), 7);
    assert!(summary["node_count"].as_u64().unwrap() > 0);

    for stage in [
        "median", "frangi", "otsu", "close", "skeleton", "edges", "graph",
    ] {
        let (status, bytes, content_type) = call(
            &app,
            Method::GET,
            &format!("/sessions/{id}/stage/{stage}.png"),
            None,
        )
        .await;
        assert_eq!(status, StatusCode::OK, "{stage}");
        assert_eq!(content_type.as_deref(), Some("image/png"));
        assert!(bytes.starts_with(b"\x89PNG"));
    }
    let (status, _, _) = call(
        &app,
        Method::GET,
        &format!("/sessions/{id}/stage/unknown.png"),
        None,
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let click = json!({ "start": [10, 64], "end": [118, 64] });
    let (status, bytes, _) = call(
        &app,
        Method::POST,
        &format!("/sessions/{id}/trace"),
        Some(click.clone()),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let record = json_of(&bytes);
    assert!((record["length_px"].as_f64().unwrap() - 108.0).abs() <= 2.16);
    assert_eq!(record["start_click"], json!([10, 64]));

    let (_, again, _) = call(
        &app,
        Method::POST,
        &format!("/sessions/{id}/trace"),
        Some(click),
    )
    .await;
    assert_eq!(
        json_of(&again),
        record,
        "re-tracing identical clicks gives an identical record"
    );

    let (status, bytes, _) =
        call(&app, Method::GET, &format!("/sessions/{id}/segments"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(json_of(&bytes).as_array().unwrap().len(), 2);

    let (status, _, _) = call(&app, Method::DELETE, &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, bytes, _) =
        call(&app, Method::GET, &format!("/sessions/{id}/segments"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(json_of(&bytes)["error"], "SessionNotFound");
}

#[tokio::test]
async fn stage_errors_name_the_stage() {
    let app = router();
    let id = create(&app, &GrayImage::filled(32, 32, 90), None).await;
    let (status, bytes, _) = call(&app, Method::POST, &format!("/sessions/{id}/run"), None).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let body = json_of(&bytes);
    assert_eq!(body["error"], "DegenerateHistogram");
    assert_eq!(body["stage"], "otsu");
    assert!(body["message"].as_str().unwrap().contains("otsu"));
}

#[tokio::test]
async fn disconnected_clicks_report_no_path() {
    let app = router();
    let two_vessels = render_tubes(
        128,
        128,
        &[
            TubeSegment::new((10.0, 30.0), (118.0, 30.0), 3.5),
            TubeSegment::new((10.0, 96.0), (118.0, 96.0), 3.5),
        ],
        200.0,
        20.0,
    );
    let id = create(&app, &two_vessels, None).await;
    let (status, _, _) = call(&app, Method::POST, &format!("/sessions/{id}/run"), None).await;
    assert_eq!(status, StatusCode::OK);
    let click = json!({ "start": [60, 30], "end": [60, 96] });
    let (status, bytes, _) = call(
        &app,
        Method::POST,
        &format!("/sessions/{id}/trace"),
        Some(click),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(json_of(&bytes)["error"], "NoPath");
}

#[tokio::test]
async fn malformed_requests_are_rejected() {
    let app = router();
    let (status, bytes, _) = call(
        &app,
        Method::POST,
        "/sessions",
        Some(json!({ "image": "%%%" })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json_of(&bytes)["error"], "BadRequest");

    let junk = base64::engine::general_purpose::STANDARD.encode(b"not an image");
    let (status, bytes, _) = call(
        &app,
        Method::POST,
        "/sessions",
        Some(json!({ "image": junk })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json_of(&bytes)["error"], "InvalidImage");

    let body = json!({ "image": encoded(&tube_phantom()), "config": { "radius_step": -1.0 } });
    let (status, bytes, _) = call(&app, Method::POST, "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json_of(&bytes)["error"], "InvalidConfig");

    let id = create(&app, &tube_phantom(), Some(json!({ "median_window": 5 }))).await;
    let (status, _, _) = call(
        &app,
        Method::POST,
        &format!("/sessions/{id}/trace"),
        Some(json!({ "start": [1] })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _, _) = call(
        &app,
        Method::POST,
        &format!("/sessions/{id}/trace"),
        Some(json!({ "start": [-1, 0], "end": [3, 3] })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, bytes, _) = call(
        &app,
        Method::POST,
        &format!("/sessions/{id}/trace"),
        Some(json!({ "start": [1, 1], "end": [3, 3] })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(json_of(&bytes)["error"], "NotRun");
}
