// Day-based service payloads are converted for display here and nowhere else.
// Conversion constants mirror the service's reporting rules exactly.

export const MINUTES_PER_DAY = 1440;
export const HOURS_PER_DAY = 24;

export function daysToMinutes(days: number): number {
  return days * MINUTES_PER_DAY;
}

export function daysToHours(days: number): number {
  return days * HOURS_PER_DAY;
}

/** Round to 4 significant figures (the console's display precision). */
export function sig4(value: number): number {
  if (!Number.isFinite(value) || value === 0) return value;
  return Number(value.toPrecision(4));
}

export function fmt(value: number | null | undefined, unit = ""): string {
  if (value === null || value === undefined || !Number.isFinite(value)) return "-";
  const v = sig4(value);
  return unit ? `${v} ${unit}` : String(v);
}
