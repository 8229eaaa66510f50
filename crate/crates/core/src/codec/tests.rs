use super::*;
use crate::bits::parse_bits;
use crate::channel::{enumerate_patterns, sample_uniform, DeletionPattern};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code(k: usize, ell: usize, c: usize, delta: usize) -> GcCode {
    GcCode::new(GcParams::new(k, ell, c, delta).unwrap()).unwrap()
}

fn random_bits(rng: &mut impl Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn all_messages(k: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u32..1 << k).map(move |v| (0..k).map(|i| (v >> (k - 1 - i) & 1) as u8).collect())
}

/// The guess that matches a deletion pattern.
fn true_guess(p: &GcParams, d: &DeletionPattern) -> Guess {
    let mut g = vec![0; p.m()];
    let mut delta1 = 0;
    for &pos in d.positions() {
        if pos <= p.k() {
            g[(pos - 1) / p.ell()] += 1;
            delta1 += 1;
        }
    }
    Guess { delta1, g }
}

#[test]
fn params_and_lengths() {
    let p = GcParams::new(32, 5, 2, 1).unwrap();
    assert_eq!(p.n(), 52);
    assert_eq!(p.m(), 7);
    assert_eq!(p.redundancy(), 2 * 2 * 5);
    assert_eq!(p.block_len(6), 2);
    assert_eq!(p.block_len(0), 5);

    assert!(GcParams::new(32, 5, 1, 1).is_err(), "c must exceed delta");
    assert!(GcParams::new(32, 5, 2, 0).is_err());
    assert!(GcParams::new(0, 5, 2, 1).is_err());
    assert!(GcParams::new(16, 2, 2, 1).is_err(), "m + c > q");
    assert!(GcParams::new(8, 17, 2, 1).is_err());

    let d = GcParams::with_defaults(1024, 3).unwrap();
    assert_eq!((d.ell(), d.c(), d.m()), (10, 4, 103));
    assert_eq!(ceil_log2(32), 5);
    assert_eq!(ceil_log2(33), 6);
}

#[test]
fn encode_zero_and_layout() {
    let gc = code(32, 5, 2, 1);
    let x = gc.encode(&[0; 32]).unwrap();
    assert_eq!(x.bits(), &[0u8; 52][..]);
    assert!(gc.encode(&[0; 31]).is_err());
    assert!(gc.encode(&[2; 32]).is_err());
}

#[test]
fn encode_matches_matrix_product() {
    let gc = code(8, 4, 2, 1);
    let msg = parse_bits("10110010").unwrap();
    let x = gc.encode(&msg).unwrap();
    let f = gc.field().clone();
    let pm = gc.parity_matrix();
    let d0 = f.element(0b1011).unwrap();
    let d1 = f.element(0b0010).unwrap();
    let mut expect = msg.clone();
    for j in 0..2 {
        let pj = f.add(f.mul(d0, pm.entry(0, j)), f.mul(d1, pm.entry(1, j)));
        for b in (0..4).rev() {
            let bit = (pj.value() >> b & 1) as u8;
            expect.extend([bit, bit]);
        }
    }
    assert_eq!(x.bits(), &expect[..]);
    // parity region is made of (δ+1)-fold repeated bits
    for pair in x.bits()[8..].chunks(2) {
        assert_eq!(pair[0], pair[1]);
    }
}

#[test]
fn parity_recovery_examples() {
    // δ = 2, parity bits "10" encoded "111000", two bits of the first run lost
    assert_eq!(recover_repeated(&parse_bits("1000").unwrap(), 2, 3).unwrap(), vec![1, 0]);
    // leading message bits equal to the first parity run are clamped away
    assert_eq!(recover_repeated(&parse_bits("0111000").unwrap(), 2, 3).unwrap(), vec![1, 0]);
    assert_eq!(recover_repeated(&parse_bits("11000").unwrap(), 3, 3), None);

    let gc = code(16, 4, 3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let msg = random_bits(&mut rng, 16);
        let x = gc.encode(&msg).unwrap();
        let tail = &x.bits()[16..];
        let expect: Vec<u8> = tail.iter().step_by(3).copied().collect();
        assert_eq!(gc.recover_parities(x.bits()).unwrap(), expect);
        let d = sample_uniform(gc.params().n(), 2, &mut rng).unwrap();
        assert_eq!(gc.recover_parities(&d.apply(x.bits()).unwrap()).unwrap(), expect);
    }
    assert!(gc.recover_parities(&[0; 10]).is_err());
}

#[test]
fn guess_enumeration_counts() {
    let guesses: Vec<_> = enumerate_guesses(1, 1).collect();
    assert_eq!(
        guesses,
        vec![
            Guess { delta1: 0, g: vec![0] },
            Guess { delta1: 1, g: vec![1] }
        ]
    );
    let all: Vec<_> = enumerate_guesses(7, 2).collect();
    assert_eq!(all.len(), 36);
    assert_eq!(all.iter().filter(|g| g.delta1 == 2).count(), 28);
    assert!(all.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
    assert!(all.iter().all(|g| g.g.iter().sum::<usize>() == g.delta1));
    assert_eq!(GcParams::new(32, 5, 3, 2).unwrap().guess_count(), 36);
}

#[test]
fn decode_guess_recovers_transmitted_codeword() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(k, ell, c, delta) in &[(8, 4, 2, 1), (10, 4, 3, 2), (32, 5, 4, 3), (7, 3, 3, 2)] {
        let gc = code(k, ell, c, delta);
        let p = *gc.params();
        for _ in 0..300 {
            let msg = random_bits(&mut rng, k);
            let x = gc.encode(&msg).unwrap();
            let d = sample_uniform(p.n(), delta, &mut rng).unwrap();
            let y = d.apply(x.bits()).unwrap();
            let parity = gc.recover_parities(&y).unwrap();
            let cand = gc.decode_guess(&y, &true_guess(&p, &d), &parity).unwrap();
            assert_eq!(cand.message, msg);
            assert_eq!(&cand.codeword, &x);
            assert!(gc.check_candidate(&cand, &y, &parity));
        }
    }
}

#[test]
fn decode_guess_without_message_deletions() {
    let gc = code(8, 4, 2, 1);
    let msg = parse_bits("01101001").unwrap();
    let x = gc.encode(&msg).unwrap();
    let y = DeletionPattern::new(vec![20]).unwrap().apply(x.bits()).unwrap();
    let parity = gc.recover_parities(&y).unwrap();
    let cand = gc
        .decode_guess(&y, &Guess { delta1: 0, g: vec![0, 0] }, &parity)
        .unwrap();
    assert_eq!(cand.message, y[..8].to_vec());
    assert_eq!(cand.codeword, gc.encode(&y[..8]).unwrap());
}

#[test]
fn decode_guess_hand_trace() {
    // k=8, ℓ=4, c=2, δ=1; message 1011 0110, delete position 2
    let gc = code(8, 4, 2, 1);
    let f = gc.field().clone();
    let pm = gc.parity_matrix();
    let msg = parse_bits("10110110").unwrap();
    let x = gc.encode(&msg).unwrap();
    let y = DeletionPattern::new(vec![2]).unwrap().apply(x.bits()).unwrap();
    assert_eq!(&y[..7], &parse_bits("1110110").unwrap()[..]);
    let parity = gc.recover_parities(&y).unwrap();
    let p0 = f.element(parity[..4].iter().fold(0, |a, &b| a << 1 | b as u32)).unwrap();

    // the erased block value is found by scanning every field element
    let solve = |known_block: usize, known: u32| -> u32 {
        (0..16u32)
            .find(|&v| {
                let mut d = [0u32; 2];
                d[known_block] = known;
                d[1 - known_block] = v;
                let s = f.add(
                    f.mul(f.element(d[0]).unwrap(), pm.entry(0, 0)),
                    f.mul(f.element(d[1]).unwrap(), pm.entry(1, 0)),
                );
                s == p0
            })
            .unwrap()
    };

    // δ₁ = 1, deletion in block 0: block 1 is y[3..7] = 0110
    let g0 = gc.decode_guess(&y, &Guess { delta1: 1, g: vec![1, 0] }, &parity).unwrap();
    let v = solve(1, 0b0110);
    let mut expect = gc.field().bits_from_symbol(f.element(v).unwrap());
    expect.extend(parse_bits("0110").unwrap());
    assert_eq!(g0.message, expect);
    assert_eq!(g0.message, msg);

    // δ₁ = 1, deletion in block 1: block 0 is y[0..4] = 1110
    let g1 = gc.decode_guess(&y, &Guess { delta1: 1, g: vec![0, 1] }, &parity).unwrap();
    let v = solve(0, 0b1110);
    let mut expect = parse_bits("1110").unwrap();
    expect.extend(gc.field().bits_from_symbol(f.element(v).unwrap()));
    assert_eq!(g1.message, expect);

    // δ₁ = 0: message is y[0..8]
    let g2 = gc.decode_guess(&y, &Guess { delta1: 0, g: vec![0, 0] }, &parity).unwrap();
    assert_eq!(g2.message, y[..8].to_vec());
}

#[test]
fn decode_guess_infeasible_block() {
    // last block has a single bit, it cannot lose two
    let gc = code(7, 3, 3, 2);
    let x = gc.encode(&[1, 0, 1, 1, 0, 0, 1]).unwrap();
    let y = DeletionPattern::new(vec![1, 2]).unwrap().apply(x.bits()).unwrap();
    let parity = gc.recover_parities(&y).unwrap();
    assert!(gc
        .decode_guess(&y, &Guess { delta1: 2, g: vec![0, 0, 2] }, &parity)
        .is_none());
}

/// Checking-phase oracle: compare parity bits of a full re-encoding and
/// test the subsequence relation with an LCS table.
fn check_oracle(gc: &GcCode, cand: &Candidate, y: &[u8], parity: &[u8]) -> bool {
    let p = gc.params();
    let re = gc.encode(&cand.message).unwrap();
    let reps = p.delta() + 1;
    let re_parity: Vec<u8> = re.bits()[p.k()..].iter().step_by(reps).copied().collect();
    let ell = p.ell();
    let parity_ok = (p.delta()..p.c()).all(|j| re_parity[j * ell..(j + 1) * ell] == parity[j * ell..(j + 1) * ell]);
    let x = cand.codeword.bits();
    let mut lcs = vec![vec![0usize; x.len() + 1]; y.len() + 1];
    for i in 1..=y.len() {
        for j in 1..=x.len() {
            lcs[i][j] = if y[i - 1] == x[j - 1] {
                lcs[i - 1][j - 1] + 1
            } else {
                lcs[i - 1][j].max(lcs[i][j - 1])
            };
        }
    }
    parity_ok && lcs[y.len()][x.len()] == y.len()
}

#[test]
fn check_candidate_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for &(k, ell, c, delta) in &[(8, 4, 2, 1), (8, 4, 3, 2), (9, 3, 3, 2)] {
        let gc = code(k, ell, c, delta);
        for _ in 0..100 {
            let msg = random_bits(&mut rng, k);
            let x = gc.encode(&msg).unwrap();
            let d = sample_uniform(gc.params().n(), delta, &mut rng).unwrap();
            let y = d.apply(x.bits()).unwrap();
            let parity = gc.recover_parities(&y).unwrap();
            for g in gc.params().guesses() {
                if let Some(cand) = gc.decode_guess(&y, &g, &parity) {
                    assert_eq!(
                        gc.check_candidate(&cand, &y, &parity),
                        check_oracle(&gc, &cand, &y, &parity)
                    );
                }
            }
        }
    }
    let gc = code(8, 4, 2, 1);
    let x = gc.encode(&[1; 8]).unwrap();
    let parity = gc.recover_parities(&x.bits()[1..]).unwrap();
    let zero = Candidate {
        message: vec![0; 8],
        codeword: gc.encode(&[0; 8]).unwrap(),
    };
    assert!(!gc.check_candidate(&zero, &x.bits()[1..], &parity));
}

#[test]
fn list_decode_exhaustive_membership_small() {
    for &(k, ell, c, delta) in &[(6, 3, 2, 1), (7, 3, 3, 2), (8, 4, 2, 1)] {
        let gc = code(k, ell, c, delta);
        let n = gc.params().n();
        for msg in all_messages(k) {
            let x = gc.encode(&msg).unwrap();
            for d in enumerate_patterns(n, delta) {
                let y = d.apply(x.bits()).unwrap();
                let list = gc.list_decode(&y).unwrap();
                assert!(list.contains_codeword(x.bits()), "k={k} msg={msg:?} d={d:?}");
                for cand in &list {
                    assert_eq!(cand.codeword.len(), n);
                    assert!(is_subsequence(&y, cand.codeword.bits()));
                    assert_eq!(gc.encode(&cand.message).unwrap(), cand.codeword);
                }
                assert!(list.len() as u128 <= gc.params().guess_count());
            }
        }
    }
}

#[test]
fn fast_and_direct_decoders_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let configs = [
        (8, 4, 2, 1),
        (10, 4, 3, 2),
        (7, 3, 3, 2),
        (32, 5, 2, 1),
        (32, 5, 3, 2),
        (32, 5, 4, 3),
        (64, 6, 4, 3),
        (20, 5, 6, 3),
        (12, 4, 5, 4),
    ];
    for &(k, ell, c, delta) in &configs {
        let gc = code(k, ell, c, delta);
        for _ in 0..300 {
            let msg = random_bits(&mut rng, k);
            let x = gc.encode(&msg).unwrap();
            let d = sample_uniform(gc.params().n(), delta, &mut rng).unwrap();
            let y = d.apply(x.bits()).unwrap();
            assert_eq!(gc.list_decode(&y).unwrap(), gc.list_decode_direct(&y).unwrap());
        }
        // strings that were not produced by the channel exercise the failure path
        for _ in 0..50 {
            let y = random_bits(&mut rng, gc.params().n() - delta);
            assert_eq!(gc.list_decode(&y), gc.list_decode_direct(&y));
        }
    }
}

#[test]
fn list_decode_rejects_wrong_length() {
    let gc = code(8, 4, 2, 1);
    let x = gc.encode(&[0; 8]).unwrap();
    assert!(matches!(
        gc.list_decode(x.bits()),
        Err(Error::LengthMismatch { expected: 23, actual: 24 })
    ));
    assert!(gc.list_decode(&x.bits()[2..]).is_err());
}

#[test]
fn list_decode_is_deterministic_and_sorted() {
    let gc = code(32, 5, 3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let msg = random_bits(&mut rng, 32);
        let x = gc.encode(&msg).unwrap();
        let d = sample_uniform(gc.params().n(), 2, &mut rng).unwrap();
        let y = d.apply(x.bits()).unwrap();
        let a = gc.list_decode(&y).unwrap();
        let b = gc.list_decode(&y).unwrap();
        assert_eq!(a, b);
        assert!(a.candidates().windows(2).all(|w| w[0].message < w[1].message));
    }
}
