use ifir_ffi::*;
use std::ffi::{c_char, CString};
use std::ptr;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let n = unsafe { ifir_last_error(buf.as_mut_ptr(), buf.len()) };
    let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn config(json: &str) -> *mut IfirConfig {
    let text = CString::new(json).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { ifir_config_from_json(text.as_ptr(), &mut cfg) },
        IfirStatus::Ok
    );
    assert!(!cfg.is_null());
    cfg
}

const SMALL: &str = r#"{"k": 3, "symbols": 120, "runs": 2, "algorithm": "lms", "mode": "training",
    "channel_profile": {"kind": "fixed", "delays": [0, 2], "powers_db": [0.0, -6.0]}}"#;

#[test]
fn campaign_round_trip() {
    let cfg = config(SMALL);
    let mut campaign = ptr::null_mut();
    unsafe {
        assert_eq!(ifir_campaign_run(cfg, &mut campaign), IfirStatus::Ok);
        let mut len = 0;
        assert_eq!(ifir_campaign_len(campaign, &mut len), IfirStatus::Ok);
        assert_eq!(len, 120);
        let mut summary = IfirSummary::default();
        assert_eq!(
            ifir_campaign_summary(campaign, &mut summary),
            IfirStatus::Ok
        );
        assert_eq!(summary.runs, 2);
        assert!(summary.final_mse.is_finite());

        let mut mse = vec![0.0; len];
        assert_eq!(
            ifir_campaign_series(campaign, IfirMetric::Mse, mse.as_mut_ptr(), len),
            IfirStatus::Ok
        );
        assert!(mse.iter().all(|x| x.is_finite() && *x >= 0.0));
        let mut short = vec![0.0; 3];
        assert_eq!(
            ifir_campaign_series(campaign, IfirMetric::Ber, short.as_mut_ptr(), 3),
            IfirStatus::BufferTooSmall
        );
        assert!(last_error().contains("120"));

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("out.csv").to_str().unwrap()).unwrap();
        assert_eq!(
            ifir_campaign_export(campaign, cfg, path.as_ptr(), IfirFormat::Csv),
            IfirStatus::Ok
        );
        let text = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
        assert_eq!(text.lines().count(), 121);

        let bad = CString::new(dir.path().join("no/such/dir.csv").to_str().unwrap()).unwrap();
        assert_eq!(
            ifir_campaign_export(campaign, cfg, bad.as_ptr(), IfirFormat::Json),
            IfirStatus::Io
        );

        ifir_campaign_free(campaign);
        ifir_config_free(cfg);
    }
}

#[test]
fn config_errors_map_to_codes() {
    let mut cfg = ptr::null_mut();
    unsafe {
        let text = CString::new(r#"{"n": 30}"#).unwrap();
        assert_eq!(
            ifir_config_from_json(text.as_ptr(), &mut cfg),
            IfirStatus::Config
        );
        assert!(cfg.is_null());
        assert!(last_error().contains("31 or 63"));

        let text = CString::new("{not json").unwrap();
        assert_eq!(
            ifir_config_from_json(text.as_ptr(), &mut cfg),
            IfirStatus::Serialization
        );
        assert_eq!(
            ifir_config_from_json(ptr::null(), &mut cfg),
            IfirStatus::NullPointer
        );

        let invalid = [0xffu8 as c_char, 0];
        assert_eq!(
            ifir_config_from_json(invalid.as_ptr(), &mut cfg),
            IfirStatus::InvalidUtf8
        );

        assert_eq!(ifir_config_default(&mut cfg), IfirStatus::Ok);
        let mut m = 0;
        assert_eq!(ifir_config_observation_len(cfg, &mut m), IfirStatus::Ok);
        assert_eq!(m, 36);
        assert_eq!(ifir_config_set_run(cfg, 5, 3, 0), IfirStatus::Ok);
        let mut campaign = ptr::null_mut();
        assert_eq!(
            ifir_campaign_run(ptr::null(), &mut campaign),
            IfirStatus::NullPointer
        );
        ifir_config_free(cfg);
        ifir_config_free(ptr::null_mut());
        ifir_campaign_free(ptr::null_mut());
        ifir_receiver_free(ptr::null_mut());
    }
}

#[test]
fn receiver_learns_single_user() {
    let cfg = config(
        r#"{"k": 1, "lp": 1, "l": 1, "ni": 1, "receiver": "full_rank", "algorithm": "rls", "mode": "training",
            "channel_profile": {"kind": "fixed", "delays": [0], "powers_db": [0.0]}}"#,
    );
    let n = 31;
    let chip = 1.0 / (n as f64).sqrt();
    let code: Vec<f64> = (0..n)
        .flat_map(|i| [if i % 3 == 0 { -chip } else { chip }, 0.0])
        .collect();
    let mut rx = ptr::null_mut();
    unsafe {
        assert_eq!(
            ifir_receiver_new(cfg, code.as_ptr(), 30, &mut rx),
            IfirStatus::DimensionMismatch
        );
        assert_eq!(
            ifir_receiver_new(cfg, code.as_ptr(), n, &mut rx),
            IfirStatus::Ok
        );
        let mut out = [0.0; 2];
        for i in 0..100 {
            let b = if i % 2 == 0 { 1.0 } else { -1.0 };
            let r: Vec<f64> = code.iter().map(|c| c * b).collect();
            assert_eq!(
                ifir_receiver_update(rx, r.as_ptr(), n, 1, b, out.as_mut_ptr()),
                IfirStatus::Ok
            );
        }
        let r: Vec<f64> = code.iter().map(|c| -c).collect();
        assert_eq!(
            ifir_receiver_output(rx, r.as_ptr(), n, out.as_mut_ptr()),
            IfirStatus::Ok
        );
        assert!(
            (out[0] + 1.0).abs() < 1e-3 && out[1].abs() < 1e-3,
            "{out:?}"
        );
        assert_eq!(
            ifir_receiver_output(rx, r.as_ptr(), n - 1, out.as_mut_ptr()),
            IfirStatus::DimensionMismatch
        );
        ifir_receiver_free(rx);
        ifir_config_free(cfg);
    }
}

#[test]
fn complexity_matches_table() {
    let (mut add, mut mul) = (0, 0);
    unsafe {
        assert_eq!(
            ifir_complexity(IfirAlgorithm::LmsFull, 36, 1, 1, 1, 6, &mut add, &mut mul),
            IfirStatus::Ok
        );
        assert_eq!((add, mul), (72, 73));
        assert_eq!(
            ifir_complexity(IfirAlgorithm::LmsFull, 0, 1, 1, 1, 6, &mut add, &mut mul),
            IfirStatus::InvalidParameter
        );
        assert_eq!(
            ifir_complexity(
                IfirAlgorithm::LmsFull,
                36,
                1,
                1,
                1,
                6,
                ptr::null_mut(),
                &mut mul
            ),
            IfirStatus::NullPointer
        );
    }
}

#[test]
fn header_declares_every_export() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ifir.h")).unwrap();
    let source =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.trim().strip_prefix("pub unsafe extern \"C\" fn "))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for ty in [
        "typedef struct IfirConfig IfirConfig",
        "typedef struct IfirCampaign IfirCampaign",
        "IFIR_STATUS_OK = 0",
    ] {
        assert!(header.contains(ty), "{ty}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("check.c");
    std::fs::write(&src, "#include \"ifir.h\"\nint main(void) { IfirConfig *c = 0; return ifir_config_default(&c) == IFIR_STATUS_OK ? 0 : 1; }\n").unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| {
            std::process::Command::new(c)
                .arg("--version")
                .output()
                .is_ok()
        })
        .ok_or(())
}
