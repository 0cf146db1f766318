// The bundled toy transition system for the invariant-learning oracles:
// 3-bit states, start at 0, step +2 mod 8, state 5 must stay unreachable.

export const INIT_STATE = 0;
export const BAD_STATE = 5;
export const STEP = 2;
export const STATES = 8;

export function nextState(s: number): number {
  return (s + STEP) % STATES;
}

export function reachableStates(): Set<number> {
  const seen = new Set<number>();
  const frontier = [INIT_STATE];
  while (frontier.length) {
    const s = frontier.pop()!;
    if (seen.has(s)) continue;
    seen.add(s);
    frontier.push(nextState(s));
  }
  return seen;
}

export function isInductiveInvariant(accepts: (s: number) => boolean): boolean {
  if (!accepts(INIT_STATE)) return false;
  if (accepts(BAD_STATE)) return false;
  for (let s = 0; s < STATES; s += 1) {
    if (accepts(s) && !accepts(nextState(s))) return false;
  }
  return true;
}
