/** The discrete 9 … 1 … 1/9 comparison scale offered by the judgment grid. */

export interface SaatyChoice {
  value: number;
  label: string;
}

const INTENSITIES = [9, 8, 7, 6, 5, 4, 3, 2];

export const SAATY_CHOICES: readonly SaatyChoice[] = [
  ...INTENSITIES.map((n) => ({ value: n, label: String(n) })),
  { value: 1, label: "1" },
  ...[...INTENSITIES].reverse().map((n) => ({ value: 1 / n, label: `1/${n}` })),
];

/** Display label for a stored judgment value (reciprocals as fractions). */
export function saatyLabel(value: number): string {
  for (const choice of SAATY_CHOICES) {
    if (Math.abs(choice.value - value) < 1e-9) return choice.label;
  }
  return String(value);
}
