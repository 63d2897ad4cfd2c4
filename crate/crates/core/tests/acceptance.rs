//! Acceptance suite: every release-gating check, one test per criterion,
//! each printing a pass line with its elapsed time and asserting its time
//! budget.

use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use sqfree::construction::{make_blocks, Construction};
use sqfree::digraph::{is_square_free_walk, substituted_word, verify_partition, verify_thue};
use sqfree::explorer::{census_square_free, probe_extremal, search_extremal, ProbeStrategy};
use sqfree::nonchalant::{run_nonchalant, run_statistics};
use sqfree::word::square_containing;
use sqfree::{Extension, Status, Word};

fn finish(criterion: &str, start: Instant, budget: Duration, detail: &str) {
    let elapsed = start.elapsed();
    println!("acceptance {criterion}: PASS in {elapsed:.2?} (budget {budget:?}) — {detail}");
    assert!(
        elapsed < budget,
        "{criterion} exceeded its time budget: {elapsed:.2?} >= {budget:?}"
    );
}

#[cfg(feature = "parallel")]
fn single_threaded<T: Send>(job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(job)
}

#[cfg(not(feature = "parallel"))]
fn single_threaded<T>(job: impl FnOnce() -> T) -> T {
    job()
}

#[test]
fn criterion_1_canonical_word_regression() {
    let start = Instant::now();
    let c = Construction::new().unwrap();

    let h = c.words.h.classify(3).unwrap();
    assert_eq!(h.status, Status::Extremal);

    let n = c.words.n.classify(3).unwrap();
    assert_eq!(n.status, Status::NearlyExtremal);
    assert_eq!(
        n.extensions,
        vec![Extension { position: 0, symbol: 2 }, Extension { position: 41, symbol: 0 }]
    );

    let pns = Word::concat([c.words.p.clone(), c.words.n.clone(), c.words.s.clone()]);
    assert_eq!(pns.len(), 102);
    assert_eq!(pns.classify(3).unwrap().status, Status::Extremal);

    finish("1", start, Duration::from_secs(1), "H extremal, N two-ended, PNS extremal");
}

#[test]
fn criterion_2_block_family() {
    let start = Instant::now();
    let family = make_blocks();
    assert_eq!(family.entries().len(), 12);
    for (name, block) in family.entries() {
        assert_eq!(block.len(), 41, "{name}");
        assert!(block.is_square_free(), "{name}");
        assert_eq!(block.classify(3).unwrap().status, Status::NearlyExtremal, "{name}");
    }
    finish("2", start, Duration::from_secs(1), "12 blocks of length 41, nearly extremal");
}

#[test]
fn criterion_3_digraph_certificates() {
    let start = Instant::now();
    single_threaded(|| {
        let c = Construction::new().unwrap();
        let dn_cert = verify_thue(&c.dn);
        assert!(dn_cert.passed());
        assert!(dn_cert.short_walk_violations.is_empty());
        assert!(dn_cert.factor_violations.is_empty());
        assert!(dn_cert.splice_violations.is_empty());
        assert!(verify_partition(&c.dn, &c.partition).satisfied);
        assert!(verify_thue(&c.dn_star).passed());
    });
    finish("3", start, Duration::from_secs(300), "conditions 1-3 and the partition property");
}

#[test]
fn criterion_4_generator_soundness() {
    let start = Instant::now();
    let c = Construction::new().unwrap();
    for min_length in [200, 1000, 5000] {
        let extremal = c.generate_extremal(min_length).unwrap();
        assert!(extremal.len() >= min_length);
        assert_eq!(extremal.classify(3).unwrap().status, Status::Extremal, "len {min_length}");

        let nearly = c.generate_nearly_extremal(min_length).unwrap();
        assert!(nearly.len() >= min_length);
        assert_eq!(
            nearly.classify(3).unwrap().status,
            Status::NearlyExtremal,
            "len {min_length}"
        );
    }
    finish("4", start, Duration::from_secs(120), "generated words re-verified by classification");
}

#[test]
fn criterion_5_nonchalant_regression() {
    let start = Instant::now();
    let opening = run_nonchalant(3, 8);
    let words: Vec<String> = opening.words().map(|w| w.to_string()).collect();
    assert_eq!(words, ["a", "ab", "aba", "abac", "abaca", "abacab", "abacaba", "abacabca"]);

    let long = run_nonchalant(3, 10_000);
    assert!(!long.terminated);
    assert_eq!(long.word_count(), 10_000);
    assert_eq!(long.final_word().len(), 10_000);
    assert!(long.final_word().is_square_free());
    let summary = run_statistics(&long);
    assert_eq!(summary.words, 10_000);

    finish("5", start, Duration::from_secs(300), "opening sequence exact, 10^4 steps unterminated");
}

#[test]
fn criterion_6_shortest_ternary_extremal() {
    let start = Instant::now();
    let single = single_threaded(|| search_extremal(3, 25));
    let parallel = search_extremal(3, 25);
    assert_eq!(single, parallel, "reports must not depend on the worker count");

    let (shortest, witnesses) = parallel.shortest_extremal().expect("extremal word at 25");
    assert_eq!(shortest, 25, "no ternary extremal word below length 25");
    let h: Word = "abcabacbcabcbabcabacbcabc".parse().unwrap();
    assert_eq!(witnesses, vec![h], "the canonical witness at length 25");
    assert!(parallel.extremal.iter().all(|hit| hit.length == 25));

    finish("6", start, Duration::from_secs(600), "exhaustive canonical search to length 25");
}

#[test]
fn criterion_7_four_letter_absence() {
    let start = Instant::now();
    let exhaustive = search_extremal(4, 14);
    assert!(exhaustive.extremal.is_empty(), "no 4-letter extremal word up to length 14");

    let probe = probe_extremal(
        4,
        1000,
        ProbeStrategy::RandomWalk,
        1_000_000,
        sqfree::explorer::DEFAULT_PROBE_SEED,
    );
    assert!(probe.extremal.is_empty(), "probe to length 1000 found nothing");
    assert!(probe.extension_checks >= 1_000_000);

    finish("7", start, Duration::from_secs(900), "exhaustive to 14 plus 10^6-check probe to 1000");
}

#[test]
fn criterion_8a_incremental_full_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(801);
    for _ in 0..10_000 {
        let word = random_square_free_word(&mut rng, 3, 64);
        let e = Extension {
            position: rng.random_range(0..=word.len()),
            symbol: rng.random_range(0..3),
        };
        let incremental = word.extension_keeps_square_free(&e, 3).unwrap();
        let full = word.apply_extension(&e, 3).unwrap().is_square_free();
        assert_eq!(incremental, full, "word {word} ext {e:?}");
    }
    finish("8a", start, Duration::from_secs(60), "10^4 incremental vs full square checks");
}

#[test]
fn criterion_8b_substitution_square_free() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(802);
    let classes: [Vec<u8>; 3] = [(0..9).collect(), (9..18).collect(), (18..26).collect()];
    for _ in 0..10_000 {
        let len = rng.random_range(1..=20);
        let driver = random_square_free_word(&mut rng, 3, len);
        let pieces: Vec<Word> = driver
            .letters()
            .iter()
            .map(|&class| {
                let mut pool = classes[class as usize].clone();
                let len = rng.random_range(1..=pool.len());
                let mut letters = Vec::with_capacity(len);
                for _ in 0..len {
                    let i = rng.random_range(0..pool.len());
                    letters.push(pool.swap_remove(i));
                }
                Word::from_letters(letters)
            })
            .collect();
        let out = substituted_word(&driver, &pieces, &classes).unwrap();
        assert!(out.is_square_free());
    }
    finish("8b", start, Duration::from_secs(60), "10^4 substitution instances square-free");
}

#[test]
fn criterion_8c_walk_images_nearly_extremal() {
    let start = Instant::now();
    let c = Construction::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(803);
    let walks: Vec<Vec<usize>> = (0..10_000)
        .map(|_| {
            let target = rng.random_range(1..=30);
            random_square_free_walk(&c, target, &mut rng)
        })
        .collect();

    let verify = |walk: &Vec<usize>| {
        assert!(is_square_free_walk(walk));
        let image = c.dn.image(walk).unwrap();
        assert!(image.is_square_free());
        assert_eq!(image.classify(3).unwrap().status, Status::NearlyExtremal);
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        walks.par_iter().for_each(verify);
    }
    #[cfg(not(feature = "parallel"))]
    walks.iter().for_each(verify);

    finish("8c", start, Duration::from_secs(300), "10^4 walk images square-free, nearly extremal");
}

#[test]
fn criterion_8d_census_cross_checks() {
    let start = Instant::now();
    assert_eq!(census_square_free(3, 3), vec![3, 6, 12]);
    let binary = census_square_free(2, 6);
    assert_eq!(binary, vec![2, 2, 2, 0, 0, 0]);
    assert_eq!(
        binary.iter().rposition(|&c| c > 0),
        Some(2),
        "longest binary square-free word has length 3"
    );
    finish("8d", start, Duration::from_secs(10), "census values and binary bound");
}

#[test]
fn criterion_9_mutation_sensitivity() {
    let start = Instant::now();
    let c = Construction::new().unwrap();
    let n = &c.words.n;
    let expected =
        vec![Extension { position: 0, symbol: 2 }, Extension { position: 41, symbol: 0 }];
    let mut detected = 0usize;
    let mut total = 0usize;
    for position in 0..n.len() {
        for delta in 1..3u8 {
            let mut letters = n.letters().to_vec();
            letters[position] = (letters[position] + delta) % 3;
            let mutant = Word::from_letters(letters);
            total += 1;
            let caught = match mutant.classify(3) {
                Err(_) => true, // square-freeness broke
                Ok(report) => {
                    report.status != Status::NearlyExtremal || report.extensions != expected
                }
            };
            assert!(caught, "silent pass for mutation at {position} (+{delta})");
            detected += 1;
        }
    }
    assert_eq!(total, 82);
    assert_eq!(detected, 82);
    finish("9", start, Duration::from_secs(60), "all 82 single-letter mutations detected");
}

fn random_square_free_word(rng: &mut ChaCha8Rng, k: u8, max_len: usize) -> Word {
    let target = rng.random_range(0..=max_len);
    let mut letters: Vec<u8> = Vec::with_capacity(target);
    let mut stalled = 0;
    while letters.len() < target && stalled < 20 {
        let letter = rng.random_range(0..k);
        letters.push(letter);
        if square_containing(&letters, letters.len() - 1).is_some() {
            letters.pop();
            stalled += 1;
        } else {
            stalled = 0;
        }
    }
    Word::from_letters(letters)
}

fn random_square_free_walk(c: &Construction, target: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    'restart: loop {
        let mut walk = vec![rng.random_range(0..c.dn.vertex_count())];
        while walk.len() < target {
            let mut options: Vec<usize> = c.dn.successors(*walk.last().unwrap()).to_vec();
            options.shuffle(rng);
            let mut advanced = false;
            for v in options {
                walk.push(v);
                if is_square_free_walk(&walk) {
                    advanced = true;
                    break;
                }
                walk.pop();
            }
            if !advanced {
                continue 'restart;
            }
        }
        return walk;
    }
}
