import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftgfmul.bch_codec import (BchCode, DecodeStatus, ErrorLocator, affine_solve, berlekamp_massey,
                               bits_to_int, brs_find_roots, build_code, chien_search, decode, encode,
                               int_to_bits, is_codeword, linearized_eval, linearized_images,
                               quadratic_roots, reencode_difference, syndromes_direct,
                               syndromes_reencode)
from ftgfmul.errors import CodeError, LengthMismatch, UnsatisfiableParams
from ftgfmul.gf_core import build_field, poly_degree, poly_mod, poly_mul


def x_pow_mod(e, f):
    """x^e mod f by plain polynomial reduction (alpha = x for a primitive f)."""
    return poly_mod(1 << e, f)


def syndrome_oracle(code, word):
    f = code.field.poly
    out = []
    for i in range(1, 2 * code.t + 1):
        acc = 0
        for j in np.flatnonzero(word):
            acc ^= x_pow_mod(i * int(j), f)
        out.append(acc)
    return tuple(out)


def locator_oracle(ctx, positions):
    """prod (1 + X_j x) expanded with carry-less multiply and reduce."""
    coeffs = [1]
    for j in positions:
        xj = x_pow_mod(j, ctx.poly)
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d] ^= c
            nxt[d + 1] ^= poly_mod(poly_mul(c, xj), ctx.poly)
        coeffs = nxt
    return tuple(coeffs)


@pytest.mark.parametrize("m,t,n,k", [(4, 1, 15, 11), (4, 2, 15, 7), (4, 3, 15, 5),
                                     (5, 3, 31, 16), (6, 3, 63, 45), (6, 5, 63, 36)])
def test_code_parameters(m, t, n, k):
    code = build_code(m, t)
    assert (code.n, code.k) == (n, k)
    assert poly_degree(code.g) == n - k
    # g divides x^n + 1
    assert poly_mod((1 << n) | 1, code.g) == 0
    for i in range(1, 2 * t + 1):
        acc = 0
        for d in range(poly_degree(code.g), -1, -1):
            acc = code.field.mul_clmul(acc, code.field.alpha_pow(i)) ^ ((code.g >> d) & 1)
        assert acc == 0


def test_15_7_generator():
    # x^8 + x^7 + x^6 + x^4 + 1
    assert build_code(4, 2).g == 0b111010001


def test_unsatisfiable():
    with pytest.raises(UnsatisfiableParams):
        build_code(4, 8)
    with pytest.raises(UnsatisfiableParams):
        build_code(2, 1)
    with pytest.raises(UnsatisfiableParams):
        build_code(16, 3, message_len=1 << 17)


def test_escalation_to_fit_message():
    code = build_code(6, 5, message_len=45)
    assert code.field.m == 7
    assert (code.n, code.k) == (127, 92)
    assert code.message_len == 45
    assert code.length == 80


def test_encode_examples():
    code = build_code(4, 2)
    assert not encode(code, np.zeros(7, dtype=np.uint8)).any()
    msg = int_to_bits(1, 7)
    word = encode(code, msg)
    assert bits_to_int(word) == (1 << 8) ^ poly_mod(1 << 8, code.g)
    assert bits_to_int(word) == code.g  # x^8 mod g plus x^8 is g itself
    with pytest.raises(LengthMismatch):
        encode(code, np.zeros(6, dtype=np.uint8))


def test_all_15_7_codewords_divisible():
    code = build_code(4, 2)
    for v in range(128):
        word = encode(code, int_to_bits(v, 7))
        assert poly_mod(bits_to_int(word), code.g) == 0
        assert is_codeword(code, word)
        assert syndromes_direct(code, word).is_zero()


def test_single_flip_syndromes():
    code = build_code(4, 2)
    for j in range(15):
        r = np.zeros(15, dtype=np.uint8)
        r[j] = 1
        s = syndromes_direct(code, r)
        assert s.values == tuple(x_pow_mod(i * j, code.field.poly) for i in range(1, 5))


@pytest.mark.parametrize("m,t", [(4, 2), (5, 3), (6, 5)])
def test_syndromes_match_oracle(m, t, rng):
    code = build_code(m, t)
    for _ in range(30):
        r = rng.integers(0, 2, code.n).astype(np.uint8)
        s = syndromes_direct(code, r)
        assert s.values == syndrome_oracle(code, r)
        assert syndromes_reencode(code, r).values == s.values


def test_syndrome_squares_enforced(gf16):
    from ftgfmul.bch_codec import SyndromeSet
    from .conftest import SYNDROME_VIOLATIONS
    before = len(SYNDROME_VIOLATIONS)
    with pytest.raises(CodeError):
        SyndromeSet((2, 5, 0, 0), gf16)
    # the malformed set above is deliberate; keep it out of the suite-wide tally
    assert len(SYNDROME_VIOLATIONS) == before + 1
    del SYNDROME_VIOLATIONS[before:]


def test_reencode_difference_zero_on_codeword():
    code = build_code(5, 3)
    word = encode(code, int_to_bits(0xBEEF, 16))
    assert not reencode_difference(code, word).any()
    word[3] ^= 1
    d = reencode_difference(code, word)
    assert d.tolist() == int_to_bits(1 << 3, code.parity_len).tolist()


@pytest.mark.parametrize("positions", [(2, 7), (0,), (1, 4, 13), (5, 6)])
def test_bm_matches_expanded_locator(positions):
    code = build_code(4, 3)
    r = np.zeros(15, dtype=np.uint8)
    r[list(positions)] = 1
    loc = berlekamp_massey(code, syndromes_direct(code, r))
    assert loc.coeffs == locator_oracle(code.field, positions)
    assert chien_search(code, loc) == sorted(positions)
    assert brs_find_roots(code, loc) == sorted(positions)


def test_bm_zero_syndromes():
    code = build_code(4, 2)
    loc = berlekamp_massey(code, syndromes_direct(code, np.zeros(15, dtype=np.uint8)))
    assert loc.coeffs == (1,)
    assert chien_search(code, loc) == [] == brs_find_roots(code, loc)


def test_linearized_worked_example(gf8):
    a3 = gf8.alpha_pow(3)
    imgs = linearized_images(gf8, (a3, 1))
    assert imgs == [gf8.alpha_pow(2), gf8.alpha_pow(1) ^ 1, gf8.alpha_pow(2)]
    sols = affine_solve(gf8, imgs, gf8.alpha_pow(4))
    assert sorted(s.value for s in sols) == [0b011, 0b110]
    for y in sols:
        assert (y * y + gf8.element(a3) * y + gf8.element(gf8.alpha_pow(4))).value == 0


def test_affine_no_solution(gf8):
    # y^2 + y only reaches trace-zero elements
    imgs = linearized_images(gf8, (1, 1))
    odd = [b for b in range(8) if gf8.trace(b) == 1]
    assert affine_solve(gf8, imgs, odd[0]) == []
    with pytest.raises(LengthMismatch):
        affine_solve(gf8, imgs[:2], 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.data())
def test_affine_solve_matches_brute_force(m, data):
    ctx = build_field(m)
    coeffs = data.draw(st.lists(st.integers(0, ctx.n), min_size=1, max_size=3))
    beta = data.draw(st.integers(0, ctx.n))
    imgs = linearized_images(ctx, coeffs)
    brute = []
    for y in range(ctx.size):
        val, p = 0, y
        for c in coeffs:
            val ^= ctx.mul_clmul(c, p)
            p = ctx.mul_clmul(p, p)
        if val == beta:
            brute.append(y)
    assert [s.value for s in affine_solve(ctx, imgs, beta)] == brute
    for y in brute:
        assert linearized_eval(ctx, imgs, y).value == beta


def test_quadratic_roots_brute(gf16):
    for b in range(16):
        for c in range(16):
            brute = sorted(y for y in range(16) if gf16.mul(y, y) ^ gf16.mul(b, y) ^ c == 0)
            assert sorted(set(quadratic_roots(gf16, b, c))) == brute


def test_two_error_roots_m3(gf8):
    # errors at 1 and 2: sigma(x) = 1 + (alpha + alpha^2) x + alpha^3 x^2
    code = build_code(3, 1, poly=0xD)
    positions = [1, 2]
    loc = ErrorLocator.from_positions(gf8, positions)
    assert loc.coeffs == locator_oracle(gf8, positions) == (1, 0b110, 0b101)
    assert brs_find_roots(code, loc) == chien_search(code, loc) == positions


def test_locator_degree_too_high_for_brs():
    code = build_code(4, 2)
    loc = ErrorLocator.from_coeffs(code.field, [1, 0, 1])  # (1 + x)^2, double root
    assert chien_search(code, loc) == [0]
    assert brs_find_roots(code, loc) == [0]
    with pytest.raises(CodeError):
        ErrorLocator.from_coeffs(code.field, [0, 1])


@pytest.mark.parametrize("method", ["brs", "chien"])
def test_decode_examples(method):
    code = build_code(4, 2)
    msg = int_to_bits(0b1011001, 7)
    sent = encode(code, msg)
    out = decode(code, sent, method)
    assert out.status is DecodeStatus.NO_ERROR
    r = sent.copy()
    r[[3, 11]] ^= 1
    out = decode(code, r, method)
    assert out.status is DecodeStatus.CORRECTED
    assert out.positions == (3, 11)
    assert np.array_equal(out.word, sent)
    assert np.array_equal(out.message(code), msg)


def test_decode_length_mismatch():
    with pytest.raises(LengthMismatch):
        decode(build_code(4, 2), np.zeros(14, dtype=np.uint8))


def test_decode_flags_beyond_capability():
    code = build_code(4, 2)
    sent = encode(code, int_to_bits(77, 7))
    statuses = set()
    for pos in itertools.combinations(range(15), 3):
        r = sent.copy()
        r[list(pos)] ^= 1
        out = decode(code, r)
        assert not np.array_equal(out.word, sent)
        statuses.add(out.status)
        if out.status is DecodeStatus.UNCORRECTABLE:
            assert out.syndrome_nonzero
        else:
            assert is_codeword(code, out.word)
    assert DecodeStatus.UNCORRECTABLE in statuses


def test_descriptor_round_trip():
    for code in (build_code(4, 2), build_code(6, 5, message_len=45), build_code(8, 2, poly=0x11D)):
        again = BchCode.from_json(code.to_json())
        assert again == code
    bad = build_code(4, 2).describe()
    bad["g_hex"] = "1FF"
    with pytest.raises(CodeError):
        BchCode.from_dict(bad)
    with pytest.raises(CodeError):
        BchCode.from_dict({"t": 2})


def test_shortened_code(rng):
    code = build_code(5, 3, message_len=10)
    assert code.length == 25 and code.message_len == 10
    for _ in range(200):
        msg = rng.integers(0, 2, 10).astype(np.uint8)
        sent = encode(code, msg)
        r = sent.copy()
        pos = rng.choice(code.length, rng.integers(0, 4), replace=False)
        r[pos] ^= 1
        out = decode(code, r)
        assert np.array_equal(out.word, sent)
