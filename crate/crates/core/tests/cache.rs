use std::fs;

use spinhodge_core::integrate::{
    cache_path, cache_stats, clear_cache, flush_cache, load_cache, psi_correlator, read_cache_file, reset_memory, verify_cache,
    CACHE_HEADER,
};
use spinhodge_core::Error;

// one test: the correlator table is process-wide
#[test]
fn persistence_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    reset_memory();
    assert_eq!(cache_stats(d).unwrap().file_entries, 0);

    let values: Vec<_> = [(2, vec![2, 3]), (3, vec![7]), (1, vec![1, 1, 1])].iter().map(|(g, ds)| psi_correlator(*g, ds)).collect();
    let written = flush_cache(d).unwrap();
    assert!(written > 0);
    assert_eq!(flush_cache(d).unwrap(), 0, "a second flush appends nothing");
    let text = fs::read_to_string(cache_path(d)).unwrap();
    assert_eq!(text.lines().next(), Some(CACHE_HEADER));
    assert_eq!(verify_cache(d).unwrap(), written);

    reset_memory();
    assert_eq!(load_cache(d).unwrap(), written);
    let before = cache_stats(d).unwrap();
    let again: Vec<_> = [(2, vec![2, 3]), (3, vec![7]), (1, vec![1, 1, 1])].iter().map(|(g, ds)| psi_correlator(*g, ds)).collect();
    assert_eq!(values, again);
    let after = cache_stats(d).unwrap();
    assert_eq!(after.misses, before.misses, "warm values come from the table");

    // a wrong value is caught by verify, a malformed line already by reading
    let path = cache_path(d);
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let fields: Vec<String> = lines[3].split('\t').map(String::from).collect();
    lines[3] = format!("{}\t{}\t-999/7", fields[0], fields[1]);
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let err = verify_cache(d).unwrap_err();
    assert!(err.to_string().contains("line 4"), "{err}");
    lines[3] = "garbage".into();
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert!(read_cache_file(&path).unwrap_err().to_string().contains("line 4"));
    let e: Error = load_cache(d).unwrap_err().into();
    assert!(matches!(e, Error::Cache(_)));

    clear_cache(d).unwrap();
    assert!(!path.exists());
    assert_eq!(cache_stats(d).unwrap().memory_entries, 0);
    let recomputed: Vec<_> = [(2, vec![2, 3]), (3, vec![7]), (1, vec![1, 1, 1])].iter().map(|(g, ds)| psi_correlator(*g, ds)).collect();
    assert_eq!(values, recomputed);
}
