// Protocol differential: the solver-side runtime must decode exactly the
// values this kit encodes, for every kit oracle, across the real process
// boundary. The solver side is driven through a small Python script that
// feeds call_oracle and re-prints what it decoded.

import { execFileSync } from 'child_process';
import { mkdtempSync, writeFileSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { fileURLToPath } from 'url';
import { describe, expect, it } from 'vitest';
import {
  iceCorr, iceImpl, iceNeg, icePos, imgCorrect, ioSucc, isprime, issquare,
  istriangle,
} from '../src/handlers.js';
import { writePpm } from '../src/ppm.js';
import { checkResponse, decodeArgs, OracleHandler } from '../src/protocol.js';
import { encodeValue } from '../src/values.js';

const ROUNDS = 200;
const driver = fileURLToPath(new URL('../driver/call_oracle_driver.py', import.meta.url));
const oracle = (name: string) =>
  'node ' + fileURLToPath(new URL(`../dist/oracles/${name}.js`, import.meta.url));

function lcg(seed: number) {
  let s = seed >>> 0;
  return () => ((s = (s * 1664525 + 1013904223) >>> 0) / 2 ** 32);
}

function encodeInt(n: number): string {
  return n < 0 ? `(- ${-n})` : `${n}`;
}

function candidateBV(rnd: () => number): string {
  const c = '#b' + Math.floor(rnd() * 8).toString(2).padStart(3, '0');
  const forms = [
    `(bvule x ${c})`,
    `(= (bvand x ${c}) #b000)`,
    `(ite (bvule x ${c}) true false)`,
    `(= x ${c})`,
  ];
  const body = forms[Math.floor(rnd() * forms.length)];
  return `(define-fun inv ((x (_ BitVec 3))) Bool ${body})`;
}

function candidateInt(rnd: () => number): string {
  const c = Math.floor(rnd() * 256);
  const d = [1, 2, 3, 50, 255][Math.floor(rnd() * 5)];
  const forms = [
    `(+ v ${c})`,
    `(- ${c} v)`,
    `(div v ${d})`,
    `(ite (<= ${c} v) v ${c})`,
  ];
  const body = forms[Math.floor(rnd() * forms.length)];
  return `(define-fun pix ((v Int)) Int ${body})`;
}

interface Case {
  executable: string;
  handler: OracleHandler;
  query: unknown[];
  response: unknown[];
  inputs: string[][];
}

function differential(c: Case): void {
  const expected = c.inputs.map((tokens) => {
    const out = c.handler.run(decodeArgs(tokens, c.handler.query));
    checkResponse(out, c.handler.response);
    return out.map(encodeValue).join(' | ');
  });
  const spec = {
    executable: c.executable,
    query: c.query,
    response: c.response,
    inputs: c.inputs,
  };
  const out = execFileSync('python3', [driver], {
    input: JSON.stringify(spec),
    encoding: 'utf8',
    maxBuffer: 1 << 26,
  });
  const got = out.trim().split('\n');
  expect(got.length).toBe(expected.length);
  let mismatches = 0;
  got.forEach((line, i) => {
    if (line !== expected[i]) mismatches += 1;
  });
  expect(mismatches).toBe(0);
}

describe('protocol differential (200 round-trips per oracle)', () => {
  it('number-theory and io oracles', { timeout: 600_000 }, () => {
    const rnd = lcg(7);
    const ints = () => Array.from({ length: ROUNDS }, () =>
      [encodeInt(Math.floor(rnd() * 350) - 50)]);
    differential({ executable: oracle('isprime'), handler: isprime,
      query: ['Int'], response: ['Bool'], inputs: ints() });
    differential({ executable: oracle('issquare'), handler: issquare,
      query: ['Int'], response: ['Bool'], inputs: ints() });
    differential({ executable: oracle('istriangle'), handler: istriangle,
      query: ['Int'], response: ['Bool'], inputs: ints() });
    differential({ executable: oracle('io_succ'), handler: ioSucc,
      query: ['Int'], response: ['Int'], inputs: ints() });
  });

  it('witness oracles with empty query domains', { timeout: 600_000 }, () => {
    const empty = Array.from({ length: ROUNDS }, () => [] as string[]);
    differential({ executable: oracle('ice_pos'), handler: icePos,
      query: [], response: [['BitVec', 3], 'Bool'], inputs: empty });
    differential({ executable: oracle('ice_neg'), handler: iceNeg,
      query: [], response: [['BitVec', 3], 'Bool'], inputs: empty });
  });

  it('candidate-query oracles', { timeout: 600_000 }, () => {
    const rnd = lcg(13);
    const cands = () => Array.from({ length: ROUNDS }, () => [candidateBV(rnd)]);
    const fnSort = ['Fn', [['BitVec', 3]], 'Bool'];
    differential({ executable: oracle('ice_impl'), handler: iceImpl,
      query: [fnSort], response: [['BitVec', 3], ['BitVec', 3]], inputs: cands() });
    differential({ executable: oracle('ice_corr'), handler: iceCorr,
      query: [fnSort], response: ['Bool'], inputs: cands() });
  });

  it('image correctness oracle', { timeout: 600_000 }, () => {
    const rnd = lcg(29);
    const dir = mkdtempSync(join(tmpdir(), 'imgdiff-'));
    const pixels = Array.from({ length: 16 * 16 * 3 }, () => Math.floor(rnd() * 256));
    const orig = { width: 16, height: 16, pixels };
    const target = { width: 16, height: 16, pixels: pixels.map((v) => 255 - v) };
    const origPath = join(dir, 'orig.ppm');
    const targetPath = join(dir, 'target.ppm');
    writeFileSync(origPath, writePpm(orig));
    writeFileSync(targetPath, writePpm(target));
    const handler = imgCorrect(origPath, targetPath);
    const response: unknown[] = ['Bool'];
    for (let i = 0; i < 8; i += 1) response.push('Int', 'Int');
    differential({
      executable: `${oracle('img_correct')} ${origPath} ${targetPath}`,
      handler,
      query: [['Fn', ['Int'], 'Int']],
      response,
      inputs: Array.from({ length: ROUNDS }, () => [candidateInt(rnd)]),
    });
  });
});
