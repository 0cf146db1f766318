// Interpreter for candidate functions arriving as (define-fun ...) text.
// Supports the integer, boolean and bit-vector operations the solver's
// grammars produce. Division and modulo are Euclidean, as in SMT-LIB.

import { readOne, Sexpr } from './sexpr.js';

type Prim = bigint | boolean;

export interface Candidate {
  name: string;
  params: string[];
  widths: Map<string, number>;
  apply: (...args: Prim[]) => Prim;
}

export function parseCandidate(text: string): Candidate {
  const node = readOne(text);
  if (!Array.isArray(node) || node[0] !== 'define-fun') {
    throw new Error('candidate must be a define-fun');
  }
  const name = node[1] as string;
  const paramList = node[2] as Sexpr[];
  const params: string[] = [];
  const widths = new Map<string, number>();
  for (const p of paramList) {
    const [pname, psort] = p as Sexpr[];
    params.push(pname as string);
    if (Array.isArray(psort) && psort[0] === '_' && psort[1] === 'BitVec') {
      widths.set(pname as string, Number(psort[2]));
    }
  }
  const body = node[4];
  const apply = (...args: Prim[]) => {
    const env = new Map<string, Prim>();
    params.forEach((p, i) => env.set(p, args[i]));
    return evalBody(body, env, widths);
  };
  return { name, params, widths, apply };
}

function euclideanDiv(a: bigint, d: bigint): bigint {
  let q = a / d;
  if (a % d !== 0n && (a < 0n) !== (d < 0n)) q -= 1n;
  const r = a - q * d;
  if (r < 0n) return d > 0n ? q - 1n : q + 1n;
  return q;
}

function euclideanMod(a: bigint, d: bigint): bigint {
  let r = a % d;
  if (r < 0n) r += d < 0n ? -d : d;
  return r;
}

function evalBody(node: Sexpr, env: Map<string, Prim>, widths: Map<string, number>): Prim {
  if (!Array.isArray(node)) {
    if (env.has(node)) return env.get(node)!;
    if (node === 'true') return true;
    if (node === 'false') return false;
    if (node.startsWith('#b')) return BigInt('0b' + node.slice(2));
    if (/^\d+$/.test(node)) return BigInt(node);
    throw new Error(`unbound symbol in candidate body: ${node}`);
  }
  const op = node[0] as string;
  if (op === 'ite') {
    return evalBody(node[1], env, widths)
      ? evalBody(node[2], env, widths)
      : evalBody(node[3], env, widths);
  }
  if (op === '-' && node.length === 2) {
    const lone = node[1];
    if (!Array.isArray(lone) && /^\d+$/.test(lone as string)) return -BigInt(lone as string);
    return -(evalBody(node[1], env, widths) as bigint);
  }
  const args = node.slice(1).map((n) => evalBody(n, env, widths));
  const ints = args as bigint[];
  const width = widthOf(node.slice(1), env, widths);
  const mask = width ? (1n << BigInt(width)) - 1n : 0n;
  switch (op) {
    case '+': return ints.reduce((a, b) => a + b);
    case '-': return ints.reduce((a, b) => a - b);
    case '*': return ints.reduce((a, b) => a * b);
    case 'div': return euclideanDiv(ints[0], ints[1]);
    case 'mod': return euclideanMod(ints[0], ints[1]);
    case 'abs': return ints[0] < 0n ? -ints[0] : ints[0];
    case '=': return args.every((a) => a === args[0]);
    case '<=': return ints[0] <= ints[1];
    case '<': return ints[0] < ints[1];
    case '>=': return ints[0] >= ints[1];
    case '>': return ints[0] > ints[1];
    case 'and': return args.every(Boolean);
    case 'or': return args.some(Boolean);
    case 'not': return !args[0];
    case '=>': return !args[0] || (args[1] as boolean);
    case 'bvadd': return (ints[0] + ints[1]) & mask;
    case 'bvsub': return (ints[0] - ints[1]) & mask;
    case 'bvmul': return (ints[0] * ints[1]) & mask;
    case 'bvand': return ints[0] & ints[1];
    case 'bvor': return ints[0] | ints[1];
    case 'bvxor': return ints[0] ^ ints[1];
    case 'bvnot': return ~ints[0] & mask;
    case 'bvneg': return -ints[0] & mask;
    case 'bvule': return ints[0] <= ints[1];
    case 'bvult': return ints[0] < ints[1];
    case 'bvuge': return ints[0] >= ints[1];
    case 'bvugt': return ints[0] > ints[1];
    default:
      throw new Error(`candidate interpreter: unsupported operation ${op}`);
  }
}

function widthOf(nodes: Sexpr[], env: Map<string, Prim>, widths: Map<string, number>): number | null {
  for (const n of nodes) {
    if (!Array.isArray(n)) {
      if (widths.has(n)) return widths.get(n)!;
      if (n.startsWith('#b')) return n.length - 2;
    } else {
      const w = widthOf(n.slice(1), env, widths);
      if (w !== null) return w;
    }
  }
  return null;
}
