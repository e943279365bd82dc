export class Screen {
  private title: string;

  constructor(title: string) {
    this.title = title;
  }

  get name(): string {
    return this.title;
  }

  set name(value: string) {
    this.title = value;
  }

  render(): string {
    return `[${this.title}]`;
  }

  refresh(): void {
    this.paint(this.render());
  }

  private paint(text: string): void {
    void text;
  }
}
