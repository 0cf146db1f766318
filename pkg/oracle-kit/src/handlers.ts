// The kit's oracle handlers. Each executable under oracles/ wraps one of
// these in serve(); tests call run() in-process to compute the expected
// side of the protocol differential.

import { readFileSync } from 'fs';
import { parseCandidate } from './interp.js';
import { parsePpm } from './ppm.js';
import { OracleHandler } from './protocol.js';
import {
  BAD_STATE, INIT_STATE, STATES, isInductiveInvariant, nextState,
} from './transition.js';
import { Sort, Value, asInt, bitvec, bool, int } from './values.js';

const BV3: Sort = { bitvec: 3 };
const FUN: Sort = { fun: true };

export const isprime: OracleHandler = {
  query: ['Int'],
  response: ['Bool'],
  run: ([n]) => {
    const a = asInt(n);
    let prime = a > 1n;
    for (let d = 2n; d * d <= a && prime; d += 1n) {
      if (a % d === 0n) prime = false;
    }
    return [bool(prime)];
  },
};

export const issquare: OracleHandler = {
  query: ['Int'],
  response: ['Bool'],
  run: ([n]) => {
    const a = asInt(n);
    if (a < 0n) return [bool(false)];
    let r = 0n;
    while (r * r < a) r += 1n;
    return [bool(r * r === a)];
  },
};

export const istriangle: OracleHandler = {
  query: ['Int'],
  response: ['Bool'],
  run: ([n]) => {
    const a = asInt(n);
    let total = 0n;
    for (let k = 1n; total < a; k += 1n) total += k;
    return [bool(a > 0n && total === a)];
  },
};

export const ioSucc: OracleHandler = {
  query: ['Int'],
  response: ['Int'],
  run: ([n]) => [int(asInt(n) + 1n)],
};

export const icePos: OracleHandler = {
  query: [],
  response: [BV3, 'Bool'],
  run: () => [bitvec(3, nextState(INIT_STATE)), bool(true)],
};

export const iceNeg: OracleHandler = {
  query: [],
  response: [BV3, 'Bool'],
  run: () => [bitvec(3, BAD_STATE), bool(true)],
};

function candidateAccepts(v: Value): (s: number) => boolean {
  if (v.kind !== 'fun') throw new Error('expected a candidate function');
  const cand = parseCandidate(v.text);
  return (s) => cand.apply(BigInt(s)) === true;
}

export const iceImpl: OracleHandler = {
  query: [FUN],
  response: [BV3, BV3],
  run: ([f]) => {
    const accepts = candidateAccepts(f);
    let pair: [number, number] = [INIT_STATE, nextState(INIT_STATE)];
    for (let s = 0; s < STATES; s += 1) {
      if (accepts(s) && !accepts(nextState(s))) {
        pair = [s, nextState(s)];
        break;
      }
    }
    return [bitvec(3, pair[0]), bitvec(3, pair[1])];
  },
};

export const iceCorr: OracleHandler = {
  query: [FUN],
  response: ['Bool'],
  run: ([f]) => [bool(isInductiveInvariant(candidateAccepts(f)))],
};

export function batchSize(): number {
  const n = Number(process.env.DELPHI_IMG_BATCH ?? '8');
  return Number.isFinite(n) && n >= 1 ? Math.floor(n) : 8;
}

export function imgCorrect(origPath: string, targetPath: string,
                           batch = batchSize()): OracleHandler {
  const orig = parsePpm(readFileSync(origPath, 'utf8'));
  const target = parsePpm(readFileSync(targetPath, 'utf8'));
  if (orig.width !== target.width || orig.height !== target.height) {
    throw new Error('original and target image dimensions differ');
  }
  if (orig.width > 16 || orig.height > 16) {
    throw new Error('images larger than 16x16 are not supported');
  }
  const response: Sort[] = ['Bool'];
  for (let i = 0; i < batch; i += 1) response.push('Int', 'Int');
  return {
    query: [FUN],
    response,
    run: ([f]) => {
      if (f.kind !== 'fun') throw new Error('expected a candidate function');
      const cand = parseCandidate(f.text);
      const wrong: Array<[number, number]> = [];
      const seen = new Set<number>();
      let exact = true;
      for (let i = 0; i < orig.pixels.length; i += 1) {
        const input = orig.pixels[i];
        const want = target.pixels[i];
        if (cand.apply(BigInt(input)) !== BigInt(want)) {
          exact = false;
          if (!seen.has(input) && wrong.length < batch) {
            seen.add(input);
            wrong.push([input, want]);
          }
        }
      }
      const pad: [number, number] = exact
        ? [orig.pixels[0], target.pixels[0]]
        : wrong[0];
      while (wrong.length < batch) wrong.push(pad);
      const out: Value[] = [bool(exact)];
      for (const [input, want] of wrong) out.push(int(input), int(want));
      return out;
    },
  };
}
