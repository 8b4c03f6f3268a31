use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};

use serde_json::{json, Map, Value};

static QUIET: AtomicBool = AtomicBool::new(false);

pub(crate) fn set_quiet(quiet: bool) {
    QUIET.store(quiet, Ordering::Relaxed);
}

fn emit(level: &str, cmd: &str, event: &str, fields: Value) {
    let mut obj = Map::new();
    obj.insert("level".into(), level.into());
    obj.insert("cmd".into(), cmd.into());
    obj.insert("event".into(), event.into());
    if let Value::Object(extra) = fields {
        obj.extend(extra);
    }
    let line = Value::Object(obj).to_string();
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

/// A skipped or flagged item.
pub(crate) fn warn(cmd: &str, event: &str, fields: Value) {
    if !QUIET.load(Ordering::Relaxed) {
        emit("warn", cmd, event, fields);
    }
}

pub(crate) fn info(cmd: &str, event: &str, fields: Value) {
    if !QUIET.load(Ordering::Relaxed) {
        emit("info", cmd, event, fields);
    }
}

pub(crate) fn error(cmd: &str, msg: &str, kind: &str) {
    emit(
        "error",
        cmd,
        "failed",
        json!({ "kind": kind, "message": msg }),
    );
}
