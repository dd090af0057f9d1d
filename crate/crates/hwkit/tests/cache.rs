use hwkit::cache::{key, Cache, CACHE_ENV};
use hwkit::envelope::BoundsEcho;
use hwkit::{ResultEnvelope, Status};
use proptest::prelude::*;
use serde_json::json;

#[test]
fn store_then_load() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let mut env = ResultEnvelope::new("classify", json!({"alpha": "5/6"}));
    env.tag("closed-form");
    env.outputs = json!({"lc": true});
    let k = key("classify", &env.inputs, None);
    assert!(cache.load(&k).is_none());
    cache.store(&k, &env).unwrap();
    assert_eq!(cache.load(&k), Some(env));
}

#[test]
fn keys_separate_commands_inputs_and_bounds() {
    let i = json!({"alpha": "1"});
    let b = BoundsEcho { order: 4, xdeg: 12, dt_order: 6 };
    let k = key("bounds", &i, Some(b));
    assert_eq!(k.len(), 64);
    assert_eq!(k, key("bounds", &i, Some(b)));
    assert_ne!(k, key("classify", &i, Some(b)));
    assert_ne!(k, key("bounds", &json!({"alpha": "2"}), Some(b)));
    assert_ne!(k, key("bounds", &i, Some(BoundsEcho { order: 8, ..b })));
    assert_ne!(k, key("bounds", &i, None));
}

#[test]
fn cli_reuses_cached_results() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(CACHE_ENV, dir.path());
    let run = || {
        let mut out = Vec::new();
        let code = hwkit::run(["hwkit", "classify", "--exponents", "2,3", "--alpha", "1/2", "--json"], &mut out, &mut Vec::new());
        (code, out)
    };
    let first = run();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run();
    std::env::remove_var(CACHE_ENV);
    assert_eq!(first, second);
    assert_eq!(first.0, 0);
}

fn status() -> impl Strategy<Value = Status> {
    prop_oneof![Just(Status::Ok), Just(Status::HypothesisFailed), Just(Status::Inconclusive), Just(Status::Refuted)]
}

proptest! {
    #[test]
    fn envelope_json_round_trips(
        command in "[a-z]{1,8}",
        st in status(),
        msgs in proptest::collection::vec("[ -~]{0,20}", 0..4),
        tags in proptest::collection::vec("[a-z-]{1,12}", 0..4),
        n in any::<i64>(),
        bounds in proptest::option::of((0u32..20, 0u32..50, 0u32..30)),
    ) {
        let mut env = ResultEnvelope::new(&command, json!({"n": n, "list": [1, 2]}));
        env.status = st;
        env.bounds = bounds.map(|(order, xdeg, dt_order)| BoundsEcho { order, xdeg, dt_order });
        for t in &tags { env.tag(t); }
        for m in &msgs { env.note(m.clone()); }
        env.outputs = json!({"z": n, "a": [n.to_string()]});
        let text = env.to_json();
        let back = ResultEnvelope::from_json(&text).unwrap();
        prop_assert_eq!(&back, &env);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn status_join_is_a_semilattice(a in status(), b in status(), c in status()) {
        prop_assert_eq!(a.join(b), b.join(a));
        prop_assert_eq!(a.join(b).join(c), a.join(b.join(c)));
        prop_assert_eq!(a.join(a), a);
        prop_assert_eq!(a.join(Status::Ok), a);
        prop_assert!(a.join(b).exit_code() >= 0);
    }
}
