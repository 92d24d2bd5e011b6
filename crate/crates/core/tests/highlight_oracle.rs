use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use seedforge_core::fold::fold;
use seedforge_core::highlight::{highlight, render_annotated, validate_spans};
use seedforge_core::{HighlightOptions, RenderFormat};
use seedforge_testkit::{gen, oracle};

fn options(rng: &mut StdRng) -> HighlightOptions {
    HighlightOptions {
        case_insensitive: rng.gen_bool(0.7),
        word_boundary: rng.gen_bool(0.7),
    }
}

#[test]
fn two_hundred_documents_twenty_entities() {
    let mut rng = StdRng::seed_from_u64(200);
    let entities = gen::entities(&mut rng, 20);
    let mut total = 0;
    for _ in 0..200 {
        let doc = gen::document(&mut rng, &entities, 2_000);
        let opts = options(&mut rng);
        let got: Vec<_> = highlight(&doc, &entities, opts)
            .into_iter()
            .map(|s| (s.start, s.end, s.surface))
            .collect();
        let want: Vec<_> = oracle::naive_highlight(&doc, &entities, opts)
            .into_iter()
            .map(|(s, e, id)| (s, e, entities[id].clone()))
            .collect();
        assert_eq!(got, want, "doc {doc:?}");
        total += got.len();
    }
    assert!(total > 200, "fixture too sparse: {total} spans");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spans_are_sorted_disjoint_and_consistent(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(0..60);
        let entities = gen::entities(&mut rng, n);
        let doc = gen::document(&mut rng, &entities, 4_000);
        let opts = options(&mut rng);
        let spans = highlight(&doc, &entities, opts);
        prop_assert!(validate_spans(&doc, &spans).is_ok());
        for s in &spans {
            let text = &doc[s.start..s.end];
            if opts.case_insensitive {
                prop_assert_eq!(fold(text), fold(&s.surface));
            } else {
                prop_assert_eq!(text, s.surface.as_str());
            }
        }
        let want = oracle::naive_highlight(&doc, &entities, opts);
        prop_assert_eq!(spans.len(), want.len());

        let html = String::from_utf8(render_annotated(&doc, &spans, RenderFormat::Html).unwrap()).unwrap();
        prop_assert_eq!(html.matches("<mark ").count(), spans.len());
        prop_assert_eq!(oracle::strip_markup(&html), doc);
    }
}
