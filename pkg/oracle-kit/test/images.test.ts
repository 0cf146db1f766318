// Desk-scale image-transform synthesis through the solver's own CLI:
// invert, attenuate and brighten on 16x16 image pairs, each candidate
// pixel-exact on the full image and found inside the time budget.

import { execFileSync } from 'child_process';
import { existsSync, mkdtempSync, writeFileSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { fileURLToPath } from 'url';
import { describe, expect, it } from 'vitest';
import { parseCandidate } from '../src/interp.js';
import { Ppm, writePpm } from '../src/ppm.js';

const repoRoot = fileURLToPath(new URL('../..', import.meta.url));
const imgOracle = fileURLToPath(new URL('../dist/oracles/img_correct.js', import.meta.url));

function lcg(seed: number) {
  let s = seed >>> 0;
  return () => ((s = (s * 1664525 + 1013904223) >>> 0) / 2 ** 32);
}

function backendCommand(): string {
  if (process.env.DELPHI_SMT_SOLVER) return process.env.DELPHI_SMT_SOLVER;
  const wrapper = join(repoRoot, 'tools', 'z3cli.mjs');
  if (existsSync(wrapper)) return `node ${wrapper}`;
  throw new Error('no SMT backend: set DELPHI_SMT_SOLVER or npm install in tools/');
}

function makePair(rnd: () => number, transform: (v: number) => number,
                  maxChannel = 255): { orig: Ppm; target: Ppm } {
  const pixels = Array.from({ length: 16 * 16 * 3 },
    () => Math.floor(rnd() * (maxChannel + 1)));
  return {
    orig: { width: 16, height: 16, pixels },
    target: { width: 16, height: 16, pixels: pixels.map(transform) },
  };
}

function problemText(origPath: string, targetPath: string): string {
  const exe = `node ${imgOracle} ${origPath} ${targetPath}`;
  const rs: string[] = ['(zb Bool)'];
  const eqs: string[] = [];
  for (let i = 1; i <= 8; i += 1) {
    rs.push(`(i${i} Int)`, `(o${i} Int)`);
    eqs.push(`(= (pix i${i}) o${i})`);
  }
  return [
    '(set-logic ALL)',
    '(synth-fun pix ((v Int)) Int',
    '  ((S Int) (C Int) (D Int))',
    '  ((S Int (v C (+ S C) (- C S) (div S D)))',
    '   (C Int (0 1 2 50 255))',
    '   (D Int (1 2 50 255))))',
    `(oracle-assumption "${exe}" ((y (-> Int Int))) (${rs.join(' ')}) (= (imgok y) zb))`,
    `(oracle-constraint "${exe}" ((y (-> Int Int))) (${rs.join(' ')}) (and ${eqs.join(' ')}))`,
    '(constraint (= (imgok pix) true))',
    '(check-synth)',
  ].join('\n') + '\n';
}

function synthesize(name: string, pair: { orig: Ppm; target: Ppm }): { body: string; seconds: number } {
  const dir = mkdtempSync(join(tmpdir(), `img-${name}-`));
  const origPath = join(dir, 'orig.ppm');
  const targetPath = join(dir, 'target.ppm');
  writeFileSync(origPath, writePpm(pair.orig));
  writeFileSync(targetPath, writePpm(pair.target));
  const problem = join(dir, `${name}.sy`);
  writeFileSync(problem, problemText(origPath, targetPath));
  const started = Date.now();
  const out = execFileSync('python3', ['-m', 'delphi.cli', problem], {
    encoding: 'utf8',
    timeout: 120_000,
    env: { ...process.env, DELPHI_SMT_SOLVER: backendCommand() },
  });
  const seconds = (Date.now() - started) / 1000;
  const first = out.trim().split('\n')[0];
  expect(first.startsWith('(define-fun pix')).toBe(true);
  const cand = parseCandidate(first);
  for (let i = 0; i < pair.orig.pixels.length; i += 1) {
    expect(cand.apply(BigInt(pair.orig.pixels[i]))).toBe(BigInt(pair.target.pixels[i]));
  }
  return { body: first, seconds };
}

describe('image transform synthesis (pixel-exact, < 60 s each)', () => {
  it('invert', { timeout: 120_000 }, () => {
    const { body, seconds } = synthesize('invert',
      makePair(lcg(1), (v) => 255 - v));
    console.log(`ACCEPTANCE[image-invert] PASS ${body} in ${seconds.toFixed(1)}s`);
    expect(seconds).toBeLessThan(60);
  });

  it('attenuate', { timeout: 120_000 }, () => {
    const { body, seconds } = synthesize('attenuate',
      makePair(lcg(2), (v) => Math.floor(v / 2)));
    console.log(`ACCEPTANCE[image-attenuate] PASS ${body} in ${seconds.toFixed(1)}s`);
    expect(seconds).toBeLessThan(60);
  });

  it('brighten', { timeout: 120_000 }, () => {
    const { body, seconds } = synthesize('brighten',
      makePair(lcg(3), (v) => v + 50, 205));
    console.log(`ACCEPTANCE[image-brighten] PASS ${body} in ${seconds.toFixed(1)}s`);
    expect(seconds).toBeLessThan(60);
  });

  it('1x1 identical pair answers true immediately', () => {
    const dir = mkdtempSync(join(tmpdir(), 'img-tiny-'));
    const one: Ppm = { width: 1, height: 1, pixels: [7, 7, 7] };
    const p = join(dir, 'a.ppm');
    writeFileSync(p, writePpm(one));
    const out = execFileSync('node',
      [imgOracle, p, p, '(define-fun pix ((v Int)) Int v)'],
      { encoding: 'utf8' });
    expect(out.trim().split(/\s+/)[0]).toBe('true');
  });

  it('mismatching dimensions are rejected', () => {
    const dir = mkdtempSync(join(tmpdir(), 'img-bad-'));
    const a = join(dir, 'a.ppm');
    const b = join(dir, 'b.ppm');
    writeFileSync(a, writePpm({ width: 1, height: 1, pixels: [0, 0, 0] }));
    writeFileSync(b, writePpm({ width: 2, height: 1, pixels: [0, 0, 0, 0, 0, 0] }));
    expect(() => execFileSync('node',
      [imgOracle, a, b, '(define-fun pix ((v Int)) Int v)'],
      { encoding: 'utf8', stdio: 'pipe' })).toThrow();
  });
});
