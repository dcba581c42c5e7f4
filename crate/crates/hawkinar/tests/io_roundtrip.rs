use hawkinar::io::{read_count_series, read_point_pattern, write_count_series, write_point_pattern};
use hawkinar_core::{CountSeries, PointPattern};
use proptest::prelude::*;

proptest! {
    #[test]
    fn count_series_survives_csv(start in -1000i64..1000, counts in prop::collection::vec(0u64..1_000_000, 1..200)) {
        // an empty file carries no start index, so only non-empty series round-trip
        let s = CountSeries::new(0.25, start, counts).unwrap();
        let mut buf = Vec::new();
        write_count_series(&s, &mut buf).unwrap();
        let back = read_count_series(buf.as_slice(), 0.25).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn point_pattern_survives_csv(mut times in prop::collection::vec(0.0f64..50.0, 0..200)) {
        times.retain(|t| *t > 0.0);
        times.sort_by(f64::total_cmp);
        let p = PointPattern::new((0.0, 50.0), times).unwrap();
        let mut buf = Vec::new();
        write_point_pattern(&p, &mut buf).unwrap();
        let back = read_point_pattern(buf.as_slice(), (0.0, 50.0)).unwrap();
        // shortest round-trip float formatting makes this exact
        prop_assert_eq!(back.times(), p.times());
    }
}
