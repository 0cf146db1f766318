// serve(): the executable side of the oracle wire protocol.
// Inputs arrive one per argv entry in SMT-LIB value syntax; responses go
// to stdout, whitespace-separated, one per declared response sort.

import { decodeValue, encodeValue, Sort, Value } from './values.js';

export interface OracleHandler {
  query: Sort[];
  response: Sort[];
  run: (args: Value[]) => Value[];
}

export function seed(): number {
  return Number(process.env.DELPHI_ORACLE_SEED ?? '0');
}

export function decodeArgs(tokens: string[], sorts: Sort[]): Value[] {
  if (tokens.length !== sorts.length) {
    throw new Error(`expected ${sorts.length} inputs, got ${tokens.length}`);
  }
  return tokens.map((tok, i) => decodeValue(tok, sorts[i]));
}

export function checkResponse(out: Value[], sorts: Sort[]): void {
  if (out.length !== sorts.length) {
    throw new Error(`handler produced ${out.length} values, declared ${sorts.length}`);
  }
  out.forEach((v, i) => {
    const s = sorts[i];
    const ok =
      (s === 'Bool' && v.kind === 'bool') ||
      (s === 'Int' && v.kind === 'int') ||
      (s === 'String' && v.kind === 'string') ||
      (typeof s === 'object' && 'bitvec' in s && v.kind === 'bitvec' && v.width === s.bitvec);
    if (!ok) throw new Error(`response ${i} does not match its declared sort`);
  });
}

export function runHandler(handler: OracleHandler, tokens: string[]): string {
  const args = decodeArgs(tokens, handler.query);
  const out = handler.run(args);
  checkResponse(out, handler.response);
  return out.map(encodeValue).join(' ');
}

export function serve(handler: OracleHandler, argv = process.argv.slice(2)): never {
  try {
    process.stdout.write(runHandler(handler, argv) + '\n');
    process.exit(0);
  } catch (err) {
    process.stderr.write(`oracle error: ${err instanceof Error ? err.message : err}\n`);
    process.exit(2);
  }
}
