// Fixed-capacity history for the objective-distance sparkline.

export class RingBuffer {
  private buffer: (number | null)[];
  private start = 0;
  private count = 0;

  constructor(readonly capacity: number) {
    if (!Number.isInteger(capacity) || capacity < 1) {
      throw new Error(`capacity must be a positive integer, got ${capacity}`);
    }
    this.buffer = new Array(capacity).fill(null);
  }

  get length(): number {
    return this.count;
  }

  /** Append a sample, evicting the oldest once full. */
  push(value: number | null): void {
    const end = (this.start + this.count) % this.capacity;
    this.buffer[end] = value;
    if (this.count < this.capacity) {
      this.count += 1;
    } else {
      this.start = (this.start + 1) % this.capacity;
    }
  }

  /** Samples ordered oldest to newest. */
  values(): (number | null)[] {
    const out: (number | null)[] = [];
    for (let i = 0; i < this.count; i++) {
      out.push(this.buffer[(this.start + i) % this.capacity]);
    }
    return out;
  }

  clear(): void {
    this.start = 0;
    this.count = 0;
  }
}
